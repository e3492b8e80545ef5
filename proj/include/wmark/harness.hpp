#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wmark/attacks.hpp"
#include "wmark/pipeline.hpp"

namespace wmark {

// One evaluation record. Metric columns are deterministic across reruns;
// timing and memory columns are not.
struct EvalRow {
    std::string host_id;
    std::string watermark_id;
    double alpha = 0.0;
    int level = 0;
    std::string wavelet;
    std::string attack = "none"; // serialized AttackSpec or "none"
    std::uint64_t seed = 0;
    double psnr_db = 0.0;
    double ssim = 0.0;
    double ber = 0.0;
    double ncc = 0.0;
    double embed_seconds = 0.0;
    double extract_seconds = 0.0;
    double throughput_mpps = 0.0;
    std::uint64_t peak_memory_bytes = 0;
    std::string error; // empty on success
};

struct SweepConfig {
    std::vector<std::string> hosts;
    std::vector<std::string> watermarks;
    std::vector<PartialConfig> configs; // resolved per host/watermark pair
    std::vector<std::string> attacks;   // serialized specs; may be empty
    std::vector<std::uint64_t> seeds;   // per attack cell; defaults to {0}
    std::string output_dir;
    int jobs = 1;
};

// Reads the JSON sweep schema:
//   { "hosts": [...], "watermarks": [...],
//     "configs": [{"alpha":25,"level":2,"wavelet":"db3","threshold":128}],
//     "attacks": ["kind=gaussian,sigma=5,seed=0", ...],
//     "seeds": [1,2,3], "output_dir": "reports" }
// Omitted config fields fall back to resolve_defaults.
SweepConfig load_sweep_config(const std::string& path);

// Baseline-only sweep: one row per host x watermark x config, embedding and
// extracting with no attack. Per-row failures land in the error column.
std::vector<EvalRow> run_base_eval(const SweepConfig& cfg);

// Full sweep: per host x watermark x config, one baseline row plus one row
// per attack x seed (the attack spec's seed field is replaced by each seed).
// The embed runs once per combination.
std::vector<EvalRow> run_attack_sweep(const SweepConfig& cfg);

// CSV (header row, EvalRow field order, quoted fields) and JSON (array of
// row objects). NaN metrics serialize as an empty CSV cell / JSON null.
void write_report_csv(const std::vector<EvalRow>& rows,
                      const std::string& path);
void write_report_json(const std::vector<EvalRow>& rows,
                       const std::string& path);
std::vector<EvalRow> read_report_csv(const std::string& path);
std::vector<EvalRow> read_report_json(const std::string& path);

struct PhaseStats {
    std::vector<double> samples_s;
    double min_s = 0.0;
    double median_s = 0.0;
    double mean_s = 0.0;
    double throughput_mpps = 0.0; // megapixels / median_s
};

struct BenchReport {
    PhaseStats embed;
    PhaseStats extract;
    std::uint64_t peak_memory_bytes = 0;
    std::size_t host_width = 0;
    std::size_t host_height = 0;
    std::string os;
    std::string cpu;
    std::string isa;
};

// Times embed/extract over `iterations` runs (>= 3) after one excluded
// warm-up; single-threaded. Records host metadata alongside the numbers.
BenchReport benchmark(const RasterImage& host, const RasterImage& watermark,
                      const EmbedConfig& cfg, int iterations);

// Best-effort peak resident set of this process, in bytes.
std::uint64_t peak_rss_bytes();

std::string os_description();
std::string cpu_description();

} // namespace wmark
