#include "forkscope/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <unordered_map>

#include "forkscope/error.hpp"

namespace forkscope {

std::size_t SizeDistribution::cluster_count() const {
    std::size_t n = 0;
    for (const auto& [size, count] : counts) n += count;
    return n;
}

double SizeDistribution::mean_size() const {
    std::size_t n = cluster_count();
    return n == 0 ? 0.0 : static_cast<double>(total_origins) / static_cast<double>(n);
}

SizeDistribution size_distribution(std::span<const Cluster> clusters, std::size_t origin_count) {
    require_partition(clusters, origin_count);
    SizeDistribution d;
    for (const auto& c : clusters) ++d.counts[c.size()];
    d.total_origins = origin_count;
    return d;
}

WeightedCCDF::WeightedCCDF(const SizeDistribution& d) {
    std::size_t running = 0;
    for (auto it = d.counts.rbegin(); it != d.counts.rend(); ++it) {
        running += it->first * it->second;
        points_.emplace_back(it->first, running);
    }
    if (points_.empty() || points_.back().first != 1) points_.emplace_back(1, running);
    std::reverse(points_.begin(), points_.end());
}

std::size_t WeightedCCDF::at(std::size_t x) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), x,
                               [](const auto& p, std::size_t v) { return p.first < v; });
    return it == points_.end() ? 0 : it->second;
}

std::int64_t DeltaO::at(std::size_t x) const {
    auto it = std::lower_bound(points.begin(), points.end(), x,
                               [](const auto& p, std::size_t v) { return p.first < v; });
    return it == points.end() ? 0 : it->second;
}

DeltaO delta_o(const WeightedCCDF& a, const WeightedCCDF& b) {
    if (a.total() != b.total())
        throw InvalidArgument("delta O needs the same origin universe: " + std::to_string(a.total()) +
                              " vs " + std::to_string(b.total()) + " origins");
    std::vector<std::size_t> sizes;
    for (const auto& [x, w] : a.points()) sizes.push_back(x);
    for (const auto& [x, w] : b.points()) sizes.push_back(x);
    sizes.push_back(1);
    // First size past both supports, where the difference is back to zero.
    sizes.push_back(std::max(a.points().empty() ? 0 : a.points().back().first,
                             b.points().empty() ? 0 : b.points().back().first) + 1);
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

    DeltaO d;
    d.total_origins = a.total();
    std::int64_t max_abs = 0;
    for (std::size_t x : sizes) {
        auto diff = static_cast<std::int64_t>(a.at(x)) - static_cast<std::int64_t>(b.at(x));
        d.points.emplace_back(x, diff);
        max_abs = std::max<std::int64_t>(max_abs, std::llabs(diff));
    }
    d.ks = d.total_origins == 0 ? 0.0
                                : static_cast<double>(max_abs) / static_cast<double>(d.total_origins);
    return d;
}

std::map<std::size_t, std::size_t> component_contribution(const Cluster& target,
                                                          std::span<const Cluster> baseline) {
    std::unordered_map<NodeIndex, std::size_t> size_of;
    for (const auto& c : baseline)
        for (NodeIndex m : c.members) size_of[m] = c.size();
    std::map<std::size_t, std::size_t> flux;
    for (NodeIndex m : target.members) {
        auto it = size_of.find(m);
        if (it == size_of.end())
            throw InvalidArgument("origin " + std::to_string(m) + " is not covered by the baseline");
        ++flux[it->second];
    }
    return flux;
}

PartitionSummary summarize_partition(const SizeDistribution& d, double ks) {
    PartitionSummary s;
    s.networks = d.cluster_count();
    for (const auto& [size, count] : d.counts) {
        if (size >= 2) s.forks += size * count;
        else s.isolated += count;
    }
    s.mean_size = d.mean_size();
    s.ks = ks;
    return s;
}

namespace {

template <typename Rows>
void write_rows(const std::filesystem::path& path, const char* header, const Rows& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << header << '\n';
    for (const auto& [k, v] : rows) out << k << ',' << v << '\n';
    if (!out.flush()) throw IoError("error writing " + path.string());
}

}  // namespace

void write_size_csv(const SizeDistribution& d, const std::filesystem::path& path) {
    write_rows(path, "size,count", d.counts);
}

void write_ccdf_csv(const WeightedCCDF& w, const std::filesystem::path& path) {
    write_rows(path, "size,W", w.points());
}

void write_delta_csv(const DeltaO& d, const std::filesystem::path& path) {
    write_rows(path, "size,deltaO", d.points);
}

void write_contribution_csv(const std::map<std::size_t, std::size_t>& flux,
                            const std::filesystem::path& path) {
    write_rows(path, "size,count", flux);
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

}  // namespace forkscope
