#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "wmark/harness.hpp"
#include "wmark/image.hpp"
#include "wmark/pipeline.hpp"

namespace {

using namespace wmark;

struct ConfigFlags {
    std::optional<double> alpha;
    std::optional<int> level;
    std::string wavelet = "db3";
    int threshold = 128;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--alpha", alpha,
                        "Quantization step (default: resolved from inputs)");
        cmd->add_option("--level", level,
                        "Decomposition level (default: resolved from inputs)");
        cmd->add_option("--wavelet", wavelet, "Wavelet family db1..db8")
            ->default_str("db3");
        cmd->add_option("--threshold", threshold,
                        "Watermark binarization threshold [1,255]")
            ->default_str("128");
    }

    PartialConfig partial() const {
        PartialConfig p;
        p.alpha = alpha;
        p.level = level;
        p.family = parse_wavelet_name(wavelet, 1).family;
        p.threshold = threshold;
        return p;
    }
};

void require_lossless(const std::string& path) {
    const auto dot = path.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    for (auto& c : ext) c = static_cast<char>(std::tolower(c));
    if (ext != "png" && ext != "bmp")
        throw ArgumentError(
            "watermarked output must be lossless (.png or .bmp); JPEG "
            "distortion is applied via the attack subcommand");
}

std::pair<std::size_t, std::size_t> parse_wm_size(const std::string& s) {
    const auto x = s.find('x');
    if (x == std::string::npos || x == 0 || x + 1 >= s.size())
        throw ArgumentError("--wm-size expects HEIGHTxWIDTH, e.g. 64x64");
    try {
        const unsigned long h = std::stoul(s.substr(0, x));
        const unsigned long w = std::stoul(s.substr(x + 1));
        if (h == 0 || w == 0) throw ArgumentError("--wm-size must be positive");
        return {h, w};
    } catch (const std::invalid_argument&) {
        throw ArgumentError("--wm-size expects HEIGHTxWIDTH, e.g. 64x64");
    } catch (const std::out_of_range&) {
        throw ArgumentError("--wm-size out of range");
    }
}

nlohmann::json metric_json(double v) {
    return std::isnan(v) ? nlohmann::json() : nlohmann::json(v);
}

int cmd_embed(const std::string& host_path, const std::string& wm_path,
              const std::string& out_path, const ConfigFlags& flags,
              bool as_json) {
    require_lossless(out_path);
    const RasterImage host = load_image(host_path);
    const RasterImage watermark = load_image(wm_path);
    const bool had_level = flags.level.has_value();
    const bool had_alpha = flags.alpha.has_value();
    const EmbedConfig cfg = resolve_defaults(
        host.height, host.width, watermark.height, watermark.width,
        is_binary_image(watermark), flags.partial());
    const EmbedResult res = embed(host, watermark, cfg);
    save_image(res.watermarked, out_path);

    if (as_json) {
        nlohmann::json j;
        j["host_id"] = host_path;
        j["watermark_id"] = wm_path;
        j["alpha"] = cfg.alpha;
        j["level"] = cfg.spec.level;
        j["wavelet"] = wavelet_name(cfg.spec);
        j["attack"] = "none";
        j["seed"] = 0;
        j["psnr_db"] = metric_json(res.psnr_db);
        j["ssim"] = metric_json(res.ssim);
        j["ber"] = nullptr;
        j["ncc"] = nullptr;
        j["embed_seconds"] = res.embed_seconds;
        j["extract_seconds"] = nullptr;
        j["throughput_mpps"] =
            static_cast<double>(host.pixel_count()) / 1e6 / res.embed_seconds;
        j["peak_memory_bytes"] = peak_rss_bytes();
        j["error"] = "";
        std::cout << j.dump(2) << '\n';
    } else {
        std::printf("level=%d alpha=%g wavelet=%s%s\n", cfg.spec.level,
                    cfg.alpha, wavelet_name(cfg.spec).c_str(),
                    (!had_level || !had_alpha) ? " (resolved)" : "");
        std::printf("PSNR=%.2fdB SSIM=%.4f embed_seconds=%.4f\n", res.psnr_db,
                    res.ssim, res.embed_seconds);
        std::printf("wrote %s\n", out_path.c_str());
    }
    return 0;
}

int cmd_extract(const std::string& host_path, const std::string& input_path,
                const std::string& wm_size, const std::string& ref_path,
                const std::string& out_path, const std::string& realign_arg,
                const ConfigFlags& flags, bool as_json) {
    const RasterImage host = load_image(host_path);
    RasterImage suspect = load_image(input_path);
    const auto [wm_h, wm_w] = parse_wm_size(wm_size);

    if (!realign_arg.empty()) {
        const auto colon = realign_arg.find(':');
        if (colon == std::string::npos ||
            realign_arg.substr(0, colon) != "rotate")
            throw ArgumentError("--realign expects rotate:THETA");
        AttackSpec spec;
        spec.kind = AttackKind::rotate;
        try {
            spec.param = std::stod(realign_arg.substr(colon + 1));
        } catch (const std::exception&) {
            throw ArgumentError("--realign expects rotate:THETA");
        }
        suspect = realign(spec, suspect, Dims{host.height, host.width});
    }

    std::optional<RasterImage> reference;
    if (!ref_path.empty()) reference = load_image(ref_path);

    bool binary = reference ? is_binary_image(*reference) : true;
    const EmbedConfig cfg = resolve_defaults(host.height, host.width, wm_h,
                                             wm_w, binary, flags.partial());
    const ExtractResult res =
        extract(host, suspect, cfg, wm_h, wm_w, reference);

    if (!out_path.empty()) {
        RasterImage tile(res.tile_report.best_tile_bits.width,
                         res.tile_report.best_tile_bits.height, 1);
        for (std::size_t i = 0; i < tile.pixel_count(); ++i)
            tile.data[i] = res.tile_report.best_tile_bits.bits[i] ? 255 : 0;
        save_image(tile, out_path);
    }

    if (as_json) {
        nlohmann::json j;
        j["host_id"] = host_path;
        j["watermark_id"] = ref_path;
        j["alpha"] = cfg.alpha;
        j["level"] = cfg.spec.level;
        j["wavelet"] = wavelet_name(cfg.spec);
        j["attack"] = "none";
        j["seed"] = 0;
        j["psnr_db"] = nullptr;
        j["ssim"] = nullptr;
        j["ber"] = metric_json(res.ber);
        j["ncc"] = metric_json(res.ncc);
        j["embed_seconds"] = nullptr;
        j["extract_seconds"] = res.extract_seconds;
        j["throughput_mpps"] = nullptr;
        j["peak_memory_bytes"] = peak_rss_bytes();
        j["error"] = "";
        std::cout << j.dump(2) << '\n';
    } else {
        const auto [tr, tc] = res.tile_report.best_tile_index;
        if (reference)
            std::printf("BER=%.4f NCC=%.4f\n", res.ber, res.ncc);
        else
            std::printf("consensus tile selected (no reference; BER/NCC "
                        "unavailable)\n");
        std::printf("best_tile=(%zu,%zu) extract_seconds=%.4f\n", tr, tc,
                    res.extract_seconds);
        if (!out_path.empty()) std::printf("wrote %s\n", out_path.c_str());
    }
    return 0;
}

int cmd_attack(const std::string& input_path, const std::string& out_path,
               const std::string& type,
               const std::vector<std::string>& params, std::uint64_t seed,
               int jpeg_out_quality) {
    std::string text = "kind=" + type;
    for (const auto& p : params) text += "," + p;
    text += ",seed=" + std::to_string(seed);
    const AttackSpec spec = parse_attack(text);
    const RasterImage img = load_image(input_path);
    const RasterImage attacked = apply(spec, img);
    save_image(attacked, out_path, jpeg_out_quality);
    std::printf("%s -> %s (%zux%zu)\n", serialize_attack(spec).c_str(),
                out_path.c_str(), attacked.width, attacked.height);
    return 0;
}

int cmd_evaluate(const std::string& config_path, const std::string& csv_path,
                 const std::string& json_path, int jobs) {
    SweepConfig cfg = load_sweep_config(config_path);
    if (jobs > 0) cfg.jobs = jobs;
    const std::vector<EvalRow> rows = cfg.attacks.empty()
                                          ? run_base_eval(cfg)
                                          : run_attack_sweep(cfg);

    std::string csv = csv_path, json = json_path;
    if (csv.empty() && json.empty()) {
        const std::filesystem::path dir =
            cfg.output_dir.empty() ? "." : cfg.output_dir;
        std::filesystem::create_directories(dir);
        csv = (dir / "report.csv").string();
        json = (dir / "report.json").string();
    }
    if (!csv.empty()) write_report_csv(rows, csv);
    if (!json.empty()) write_report_json(rows, json);

    std::size_t failures = 0;
    for (const auto& r : rows)
        if (!r.error.empty()) ++failures;
    std::printf("rows=%zu failures=%zu", rows.size(), failures);
    if (!csv.empty()) std::printf(" csv=%s", csv.c_str());
    if (!json.empty()) std::printf(" json=%s", json.c_str());
    std::printf("\n");
    return 0;
}

int cmd_bench(const std::string& host_path, const std::string& wm_path,
              int iterations, const ConfigFlags& flags, bool as_json) {
    const RasterImage host = load_image(host_path);
    const RasterImage watermark = load_image(wm_path);
    const EmbedConfig cfg = resolve_defaults(
        host.height, host.width, watermark.height, watermark.width,
        is_binary_image(watermark), flags.partial());
    const BenchReport rep = benchmark(host, watermark, cfg, iterations);

    if (as_json) {
        nlohmann::json j;
        j["os"] = rep.os;
        j["cpu"] = rep.cpu;
        j["isa"] = rep.isa;
        j["host"] = host_path;
        j["host_pixels"] = rep.host_width * rep.host_height;
        j["iterations"] = iterations;
        auto phase = [](const PhaseStats& st) {
            nlohmann::json p;
            p["min_s"] = st.min_s;
            p["median_s"] = st.median_s;
            p["mean_s"] = st.mean_s;
            p["throughput_mpps"] = st.throughput_mpps;
            p["samples_s"] = st.samples_s;
            return p;
        };
        j["embed"] = phase(rep.embed);
        j["extract"] = phase(rep.extract);
        j["peak_memory_bytes"] = rep.peak_memory_bytes;
        std::cout << j.dump(2) << '\n';
    } else {
        std::printf("os: %s\ncpu: %s\nisa: %s\n", rep.os.c_str(),
                    rep.cpu.c_str(), rep.isa.c_str());
        std::printf("host: %s (%zux%zu)\n", host_path.c_str(), rep.host_width,
                    rep.host_height);
        auto phase = [](const char* name, const PhaseStats& st) {
            std::printf("%s: min=%.4fs median=%.4fs mean=%.4fs  %.2f MP/s\n",
                        name, st.min_s, st.median_s, st.mean_s,
                        st.throughput_mpps);
        };
        phase("embed  ", rep.embed);
        phase("extract", rep.extract);
        std::printf("peak_memory=%.1f MB (best effort)\n",
                    static_cast<double>(rep.peak_memory_bytes) / 1048576.0);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"FWT-AQIM image watermarking toolkit"};
    app.require_subcommand(1);
    int exit_code = 0;

    // embed
    auto* embed_cmd =
        app.add_subcommand("embed", "Embed a watermark into a host image");
    std::string e_host, e_wm, e_out;
    ConfigFlags e_flags;
    bool e_json = false;
    embed_cmd->add_option("--host", e_host, "Host image (png/bmp/jpg)")
        ->required();
    embed_cmd->add_option("--watermark", e_wm, "Watermark image (<=128x128)")
        ->required();
    embed_cmd->add_option("--out", e_out, "Output image (png/bmp)")
        ->required();
    e_flags.add_to(embed_cmd);
    embed_cmd->add_flag("--json", e_json, "Machine-readable output");
    embed_cmd->callback(
        [&] { exit_code = cmd_embed(e_host, e_wm, e_out, e_flags, e_json); });

    // extract
    auto* extract_cmd = app.add_subcommand(
        "extract", "Recover a watermark (requires the original host)");
    std::string x_host, x_input, x_size, x_ref, x_out, x_realign;
    ConfigFlags x_flags;
    bool x_json = false;
    extract_cmd->add_option("--host", x_host, "Original host image")
        ->required();
    extract_cmd->add_option("--input", x_input, "Suspect image")->required();
    extract_cmd
        ->add_option("--wm-size", x_size, "Watermark dims as HEIGHTxWIDTH")
        ->required();
    extract_cmd->add_option("--reference", x_ref,
                            "Reference watermark for tile selection/scoring");
    extract_cmd->add_option("--out", x_out, "Write the best tile as an image");
    extract_cmd->add_option("--realign", x_realign,
                            "Undo a geometric attack first (rotate:THETA)");
    x_flags.add_to(extract_cmd);
    extract_cmd->add_flag("--json", x_json, "Machine-readable output");
    extract_cmd->callback([&] {
        exit_code = cmd_extract(x_host, x_input, x_size, x_ref, x_out,
                                x_realign, x_flags, x_json);
    });

    // attack
    auto* attack_cmd =
        app.add_subcommand("attack", "Apply a simulated attack to an image");
    std::string a_input, a_out, a_type;
    std::vector<std::string> a_params;
    std::uint64_t a_seed = 0;
    int a_quality = 90;
    attack_cmd->add_option("--input", a_input, "Input image")->required();
    attack_cmd->add_option("--out", a_out, "Output image")->required();
    attack_cmd
        ->add_option("--type", a_type,
                     "crop|rotate|scale|gaussian|jpeg|median|resize|sandpaper")
        ->required();
    attack_cmd->add_option("--param", a_params,
                           "Attack parameter as key=value (e.g. sigma=5)");
    attack_cmd->add_option("--seed", a_seed, "RNG seed for noise attacks")
        ->default_str("0");
    attack_cmd->add_option("--jpeg-out-quality", a_quality,
                           "Quality when --out is a .jpg file")
        ->default_str("90");
    attack_cmd->callback([&] {
        exit_code = cmd_attack(a_input, a_out, a_type, a_params, a_seed,
                               a_quality);
    });

    // evaluate
    auto* eval_cmd = app.add_subcommand(
        "evaluate", "Run a batch sweep from a JSON config");
    std::string v_config, v_csv, v_json;
    int v_jobs = 0;
    eval_cmd->add_option("--config", v_config, "Sweep config (JSON)")
        ->required();
    eval_cmd->add_option("--csv", v_csv, "CSV report path");
    eval_cmd->add_option("--json-out", v_json, "JSON report path");
    eval_cmd->add_option("--jobs", v_jobs, "Worker threads over rows");
    eval_cmd->callback(
        [&] { exit_code = cmd_evaluate(v_config, v_csv, v_json, v_jobs); });

    // bench
    auto* bench_cmd =
        app.add_subcommand("bench", "Time embed/extract on one input pair");
    std::string b_host, b_wm;
    int b_iters = 5;
    ConfigFlags b_flags;
    bool b_json = false;
    bench_cmd->add_option("--host", b_host, "Host image")->required();
    bench_cmd->add_option("--watermark", b_wm, "Watermark image")->required();
    bench_cmd->add_option("-n,--iterations", b_iters, "Timed iterations (>=3)")
        ->default_str("5");
    b_flags.add_to(bench_cmd);
    bench_cmd->add_flag("--json", b_json, "Machine-readable output");
    bench_cmd->callback([&] {
        exit_code = cmd_bench(b_host, b_wm, b_iters, b_flags, b_json);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ArgumentError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const ConstraintError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return exit_code;
}
