#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "forkscope/cluster.hpp"

namespace forkscope {

/// Number of clusters of each size. Invariant: sum of size * count == total.
struct SizeDistribution {
    std::map<std::size_t, std::size_t> counts;
    std::size_t total_origins = 0;

    std::size_t cluster_count() const;
    double mean_size() const;
    std::size_t max_size() const { return counts.empty() ? 0 : counts.rbegin()->first; }
};

/// Throws InvalidArgument when the clusters do not partition the origins.
SizeDistribution size_distribution(std::span<const Cluster> clusters, std::size_t origin_count);

/// Weighted complementary cumulative distribution: W(x) is the number of
/// origins living in clusters of size >= x. Stored at x = 1 and at every
/// observed size; between stored sizes W is a step function.
class WeightedCCDF {
  public:
    WeightedCCDF() = default;
    explicit WeightedCCDF(const SizeDistribution& d);

    /// W(x) for any x >= 1; zero beyond the largest size.
    std::size_t at(std::size_t x) const;
    std::size_t total() const { return points_.empty() ? 0 : points_.front().second; }
    const std::vector<std::pair<std::size_t, std::size_t>>& points() const { return points_; }

  private:
    std::vector<std::pair<std::size_t, std::size_t>> points_;  // ascending size
};

inline WeightedCCDF weighted_ccdf(const SizeDistribution& d) { return WeightedCCDF(d); }

/// Signed difference of two weighted CCDFs over the same origin universe,
/// evaluated on the union of their supports, size 1, and the first size
/// past both maxima (where it is zero again).
struct DeltaO {
    std::vector<std::pair<std::size_t, std::int64_t>> points;  // (size, W_a - W_b)
    std::size_t total_origins = 0;
    /// max |delta| / total_origins, in [0, 1].
    double ks = 0.0;

    /// Step-function value at any x >= 1; zero beyond both maxima.
    std::int64_t at(std::size_t x) const;
};

/// Throws InvalidArgument when the totals differ.
DeltaO delta_o(const WeightedCCDF& a, const WeightedCCDF& b);

/// For each baseline cluster size s: how many members of `target` sit in a
/// baseline cluster of size s. Throws InvalidArgument when a target member
/// is not covered by the baseline clusters.
std::map<std::size_t, std::size_t> component_contribution(const Cluster& target,
                                                          std::span<const Cluster> baseline);

/// {"forks","networks","isolated","mean_size","ks"} for one partition.
struct PartitionSummary {
    std::size_t forks = 0;
    std::size_t networks = 0;
    std::size_t isolated = 0;
    double mean_size = 0.0;
    double ks = 0.0;
};

PartitionSummary summarize_partition(const SizeDistribution& d, double ks = 0.0);

void write_size_csv(const SizeDistribution& d, const std::filesystem::path& path);
void write_ccdf_csv(const WeightedCCDF& w, const std::filesystem::path& path);
void write_delta_csv(const DeltaO& d, const std::filesystem::path& path);
/// "size,count" of a component contribution.
void write_contribution_csv(const std::map<std::size_t, std::size_t>& flux,
                            const std::filesystem::path& path);

/// Shortest round-trip decimal representation, so outputs are stable.
std::string format_double(double v);

}  // namespace forkscope
