#pragma once

#include "tripreg/pipeline.hpp"
#include "tripreg/ring.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace tripreg {

struct BenchRow {
    std::string model;
    std::size_t src_view = 0;  // X
    std::size_t dst_view = 0;  // Y
    double rmse = 0.0;
    double rmse_medd = 0.0;
    double rotation_error_deg = 0.0;
    double translation_error = 0.0;
    double medD = 0.0;
    std::size_t correspondences = 0;
    std::size_t triplets = 0;
    std::size_t votes = 0;
    double consensus = 0.0;
    std::vector<StageTiming> timings;
    double seconds = 0.0;
};

struct SummaryStats {
    double min = 0.0;
    double median = 0.0;
    double mean = 0.0;
    double max = 0.0;

    static SummaryStats of(std::vector<double> values);
};

/// Per-pair rows in ring order plus summaries recomputed from the rows.
/// The main table holds no wall-clock data, so it is reproducible byte for
/// byte; timings go to a separate table.
struct BenchReport {
    std::vector<BenchRow> rows;

    SummaryStats rmse_summary() const;
    SummaryStats rmse_medd_summary() const;
    SummaryStats rotation_summary() const;
    SummaryStats time_summary() const;

    /// Tab-separated: header, one line per pair, a blank line, then a
    /// summary block with min/median/mean/max per metric.
    std::string to_tsv() const;
    std::string timings_tsv() const;
};

struct BenchOptions {
    RegistrationConfig config;
    // Use the ground truth as the estimate; exercises the report plumbing.
    bool dry_run = false;
};

/// Registers every adjacent pair (i, i+1 mod N) of a ring with X = view i and
/// Y = view i+1; the reference transform is gt_i * gt_{i+1}^-1.
BenchReport run_bench(const RingDataset& data, const BenchOptions& options = {});

/// Loads view_NN.ply / view_NN.gt from `dir`. Missing files are listed in
/// the Io error. The model name is the directory name.
RingDataset load_ring_dataset(const std::filesystem::path& dir);

}  // namespace tripreg
