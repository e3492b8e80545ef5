#include "wmark/harness.hpp"

#include <sys/resource.h>
#include <sys/utsname.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "wmark/kernels.hpp"
#include "wmark/metrics.hpp"

#include "json.hpp"

namespace wmark {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double megapixels(const RasterImage& img) {
    return static_cast<double>(img.pixel_count()) / 1e6;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "";
    return nlohmann::json(v).dump();
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

const char* kCsvHeader =
    "host_id,watermark_id,alpha,level,wavelet,attack,seed,psnr_db,ssim,ber,"
    "ncc,embed_seconds,extract_seconds,throughput_mpps,peak_memory_bytes,"
    "error";

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_metric(const std::string& s) {
    if (s.empty()) return kNaN;
    return std::stod(s);
}

nlohmann::json row_to_json(const EvalRow& r) {
    nlohmann::json j;
    j["host_id"] = r.host_id;
    j["watermark_id"] = r.watermark_id;
    j["alpha"] = r.alpha;
    j["level"] = r.level;
    j["wavelet"] = r.wavelet;
    j["attack"] = r.attack;
    j["seed"] = r.seed;
    auto metric = [](double v) {
        return std::isnan(v) ? nlohmann::json() : nlohmann::json(v);
    };
    j["psnr_db"] = metric(r.psnr_db);
    j["ssim"] = metric(r.ssim);
    j["ber"] = metric(r.ber);
    j["ncc"] = metric(r.ncc);
    j["embed_seconds"] = metric(r.embed_seconds);
    j["extract_seconds"] = metric(r.extract_seconds);
    j["throughput_mpps"] = metric(r.throughput_mpps);
    j["peak_memory_bytes"] = r.peak_memory_bytes;
    j["error"] = r.error;
    return j;
}

EvalRow row_from_json(const nlohmann::json& j) {
    EvalRow r;
    r.host_id = j.at("host_id").get<std::string>();
    r.watermark_id = j.at("watermark_id").get<std::string>();
    r.alpha = j.at("alpha").get<double>();
    r.level = j.at("level").get<int>();
    r.wavelet = j.at("wavelet").get<std::string>();
    r.attack = j.at("attack").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    auto metric = [&](const char* key) {
        const auto& v = j.at(key);
        return v.is_null() ? kNaN : v.get<double>();
    };
    r.psnr_db = metric("psnr_db");
    r.ssim = metric("ssim");
    r.ber = metric("ber");
    r.ncc = metric("ncc");
    r.embed_seconds = metric("embed_seconds");
    r.extract_seconds = metric("extract_seconds");
    r.throughput_mpps = metric("throughput_mpps");
    r.peak_memory_bytes = j.at("peak_memory_bytes").get<std::uint64_t>();
    r.error = j.value("error", "");
    return r;
}

// Tasks are (host, watermark, config) combinations; each embeds once and
// fills a pre-sized slice of the row vector, keeping output order fixed
// regardless of the worker count.
struct Combo {
    std::size_t host_idx, wm_idx, cfg_idx;
    std::size_t row_offset;
};

void run_combo(const SweepConfig& sweep, const Combo& combo,
               const std::vector<AttackSpec>& attacks,
               const std::vector<std::uint64_t>& seeds,
               std::vector<EvalRow>& rows) {
    const std::string& host_path = sweep.hosts[combo.host_idx];
    const std::string& wm_path = sweep.watermarks[combo.wm_idx];
    const std::size_t n_rows = 1 + attacks.size() * seeds.size();

    EvalRow base;
    base.host_id = host_path;
    base.watermark_id = wm_path;
    base.psnr_db = base.ssim = base.ber = base.ncc = kNaN;
    base.embed_seconds = base.extract_seconds = base.throughput_mpps = kNaN;

    RasterImage host, watermark;
    EmbedConfig cfg;
    EmbedResult embedded;
    bool ready = false;
    try {
        host = load_image(host_path);
        watermark = load_image(wm_path);
        cfg = resolve_defaults(host.height, host.width, watermark.height,
                               watermark.width, is_binary_image(watermark),
                               sweep.configs[combo.cfg_idx]);
        base.alpha = cfg.alpha;
        base.level = cfg.spec.level;
        base.wavelet = wavelet_name(cfg.spec);
        embedded = embed(host, watermark, cfg);
        ready = true;
    } catch (const Error& e) {
        base.error = e.what();
        for (std::size_t i = 0; i < n_rows; ++i) {
            rows[combo.row_offset + i] = base;
            if (i > 0) {
                const std::size_t cell = i - 1;
                rows[combo.row_offset + i].attack =
                    sweep.attacks[cell / seeds.size()];
                rows[combo.row_offset + i].seed = seeds[cell % seeds.size()];
            }
        }
        return;
    }

    base.psnr_db = embedded.psnr_db;
    base.ssim = embedded.ssim;
    base.embed_seconds = embedded.embed_seconds;
    base.throughput_mpps = megapixels(host) / embedded.embed_seconds;

    // baseline row: extract with no attack
    {
        EvalRow row = base;
        row.attack = "none";
        row.seed = 0;
        try {
            const ExtractResult ex =
                extract(host, embedded.watermarked, cfg, watermark.height,
                        watermark.width, watermark);
            row.ber = ex.ber;
            row.ncc = ex.ncc;
            row.extract_seconds = ex.extract_seconds;
        } catch (const Error& e) {
            row.error = e.what();
        }
        row.peak_memory_bytes = peak_rss_bytes();
        rows[combo.row_offset] = row;
    }

    for (std::size_t a = 0; a < attacks.size(); ++a) {
        for (std::size_t s = 0; s < seeds.size(); ++s) {
            EvalRow row = base;
            AttackSpec spec = attacks[a];
            spec.seed = seeds[s];
            row.attack = serialize_attack(spec);
            row.seed = spec.seed;
            try {
                RasterImage attacked = apply(spec, embedded.watermarked);
                if (spec.kind == AttackKind::rotate)
                    attacked = realign(spec, attacked,
                                       Dims{host.height, host.width});
                const ExtractResult ex =
                    extract(host, attacked, cfg, watermark.height,
                            watermark.width, watermark);
                row.ber = ex.ber;
                row.ncc = ex.ncc;
                row.extract_seconds = ex.extract_seconds;
            } catch (const Error& e) {
                row.error = e.what();
            }
            row.peak_memory_bytes = peak_rss_bytes();
            rows[combo.row_offset + 1 + a * seeds.size() + s] = row;
        }
    }
    (void)ready;
}

std::vector<EvalRow> run_sweep(const SweepConfig& sweep, bool with_attacks) {
    std::vector<AttackSpec> attacks;
    if (with_attacks)
        for (const auto& text : sweep.attacks)
            attacks.push_back(parse_attack(text));
    std::vector<std::uint64_t> seeds = sweep.seeds;
    if (seeds.empty()) seeds.push_back(0);

    const std::size_t rows_per_combo = 1 + attacks.size() * seeds.size();
    std::vector<Combo> combos;
    std::size_t offset = 0;
    for (std::size_t h = 0; h < sweep.hosts.size(); ++h)
        for (std::size_t w = 0; w < sweep.watermarks.size(); ++w)
            for (std::size_t c = 0; c < sweep.configs.size(); ++c) {
                combos.push_back(Combo{h, w, c, offset});
                offset += rows_per_combo;
            }

    std::vector<EvalRow> rows(offset);
    const int jobs = std::max(1, sweep.jobs);
    if (jobs == 1 || combos.size() <= 1) {
        for (const Combo& combo : combos)
            run_combo(sweep, combo, attacks, seeds, rows);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= combos.size()) return;
                run_combo(sweep, combos[i], attacks, seeds, rows);
            }
        };
        std::vector<std::thread> pool;
        const std::size_t n = std::min<std::size_t>(
            static_cast<std::size_t>(jobs), combos.size());
        pool.reserve(n);
        for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return rows;
}

} // namespace

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError("bad sweep config: " + std::string(e.what()));
    }
    SweepConfig cfg;
    try {
        cfg.hosts = j.value("hosts", std::vector<std::string>{});
        cfg.watermarks = j.value("watermarks", std::vector<std::string>{});
        cfg.output_dir = j.value("output_dir", std::string{});
        cfg.attacks = j.value("attacks", std::vector<std::string>{});
        cfg.seeds = j.value("seeds", std::vector<std::uint64_t>{});
        cfg.jobs = j.value("jobs", 1);
        if (j.contains("configs")) {
            for (const auto& jc : j.at("configs")) {
                PartialConfig pc;
                if (jc.contains("alpha")) pc.alpha = jc.at("alpha").get<double>();
                if (jc.contains("level")) pc.level = jc.at("level").get<int>();
                if (jc.contains("wavelet"))
                    pc.family = parse_wavelet_name(
                                    jc.at("wavelet").get<std::string>(), 1)
                                    .family;
                if (jc.contains("threshold"))
                    pc.threshold = jc.at("threshold").get<int>();
                cfg.configs.push_back(pc);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError("bad sweep config: " + std::string(e.what()));
    }
    if (cfg.configs.empty()) cfg.configs.push_back(PartialConfig{});
    for (const auto& text : cfg.attacks) parse_attack(text); // validate early
    return cfg;
}

std::vector<EvalRow> run_base_eval(const SweepConfig& cfg) {
    return run_sweep(cfg, false);
}

std::vector<EvalRow> run_attack_sweep(const SweepConfig& cfg) {
    return run_sweep(cfg, true);
}

void write_report_csv(const std::vector<EvalRow>& rows,
                      const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << kCsvHeader << '\n';
    for (const EvalRow& r : rows) {
        out << csv_escape(r.host_id) << ',' << csv_escape(r.watermark_id)
            << ',' << format_double(r.alpha) << ',' << r.level << ','
            << r.wavelet << ',' << csv_escape(r.attack) << ',' << r.seed << ','
            << format_double(r.psnr_db) << ',' << format_double(r.ssim) << ','
            << format_double(r.ber) << ',' << format_double(r.ncc) << ','
            << format_double(r.embed_seconds) << ','
            << format_double(r.extract_seconds) << ','
            << format_double(r.throughput_mpps) << ',' << r.peak_memory_bytes
            << ',' << csv_escape(r.error) << '\n';
    }
}

void write_report_json(const std::vector<EvalRow>& rows,
                       const std::string& path) {
    nlohmann::json arr = nlohmann::json::array();
    for (const EvalRow& r : rows) arr.push_back(row_to_json(r));
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << arr.dump(2) << '\n';
}

std::vector<EvalRow> read_report_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw ArgumentError("bad report: unexpected CSV header");
    std::vector<EvalRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 16)
            throw ArgumentError("bad report: wrong CSV field count");
        EvalRow r;
        r.host_id = f[0];
        r.watermark_id = f[1];
        r.alpha = parse_metric(f[2]);
        r.level = std::stoi(f[3]);
        r.wavelet = f[4];
        r.attack = f[5];
        r.seed = std::stoull(f[6]);
        r.psnr_db = parse_metric(f[7]);
        r.ssim = parse_metric(f[8]);
        r.ber = parse_metric(f[9]);
        r.ncc = parse_metric(f[10]);
        r.embed_seconds = parse_metric(f[11]);
        r.extract_seconds = parse_metric(f[12]);
        r.throughput_mpps = parse_metric(f[13]);
        r.peak_memory_bytes = std::stoull(f[14]);
        r.error = f[15];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<EvalRow> read_report_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError("bad report: " + std::string(e.what()));
    }
    std::vector<EvalRow> rows;
    try {
        if (j.is_array()) {
            for (const auto& e : j) rows.push_back(row_from_json(e));
        } else {
            rows.push_back(row_from_json(j)); // single-row emissions
        }
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError("bad report: " + std::string(e.what()));
    }
    return rows;
}

BenchReport benchmark(const RasterImage& host, const RasterImage& watermark,
                      const EmbedConfig& cfg, int iterations) {
    if (iterations < 3)
        throw ArgumentError("benchmark needs at least 3 iterations");

    BenchReport report;
    report.host_width = host.width;
    report.host_height = host.height;
    report.os = os_description();
    report.cpu = cpu_description();
    report.isa = kernels::active_isa_name();

    // warm-up, excluded from the stats
    EmbedResult warm = embed(host, watermark, cfg);
    (void)extract(host, warm.watermarked, cfg, watermark.height,
                  watermark.width, watermark);

    for (int i = 0; i < iterations; ++i) {
        const EmbedResult er = embed(host, watermark, cfg);
        report.embed.samples_s.push_back(er.embed_seconds);
        const ExtractResult ex =
            extract(host, er.watermarked, cfg, watermark.height,
                    watermark.width, watermark);
        report.extract.samples_s.push_back(ex.extract_seconds);
    }

    const double mp = megapixels(host);
    auto finish = [mp](PhaseStats& st) {
        std::vector<double> sorted = st.samples_s;
        std::sort(sorted.begin(), sorted.end());
        st.min_s = sorted.front();
        st.median_s = sorted[sorted.size() / 2];
        st.mean_s = std::accumulate(sorted.begin(), sorted.end(), 0.0) /
                    static_cast<double>(sorted.size());
        st.throughput_mpps = mp / st.median_s;
    };
    finish(report.embed);
    finish(report.extract);
    report.peak_memory_bytes = peak_rss_bytes();
    return report;
}

std::uint64_t peak_rss_bytes() {
    rusage usage{};
    if (getrusage(RUSAGE_SELF, &usage) != 0) return 0;
    return static_cast<std::uint64_t>(usage.ru_maxrss) * 1024u;
}

std::string os_description() {
    utsname u{};
    if (uname(&u) != 0) return "unknown";
    return std::string(u.sysname) + " " + u.release + " " + u.machine;
}

std::string cpu_description() {
    std::ifstream in("/proc/cpuinfo");
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("model name", 0) == 0) {
            const auto colon = line.find(':');
            if (colon != std::string::npos) {
                std::size_t start = colon + 1;
                while (start < line.size() && line[start] == ' ') ++start;
                return line.substr(start);
            }
        }
    }
    return "unknown";
}

} // namespace wmark
