#include "lbnmobo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lbnmobo/moea.hpp"
#include "lbnmobo/problems.hpp"

namespace lbnmobo {

void HypervolumeSpec::validate() const {
    if (reference_point.size() < 2) throw ArgumentError("hypervolume needs at least two objectives");
    if (ideal_point.size() != reference_point.size()) throw ArgumentError("ideal/reference dimension mismatch");
    for (std::size_t i = 0; i < reference_point.size(); ++i)
        if (!(ideal_point[i] < reference_point[i])) throw ArgumentError("ideal point must be below the reference point");
    if (mc_samples == 0) throw ArgumentError("mc_samples must be positive");
}

namespace {

bool within_reference(std::span<const double> p, std::span<const double> ref) {
    for (std::size_t i = 0; i < ref.size(); ++i)
        if (!(p[i] <= ref[i])) return false;
    return true;
}

}  // namespace

HypervolumeSpec HypervolumeSpec::around(std::span<const Vector> front, std::span<const double> reference,
                                        double margin) {
    HypervolumeSpec spec;
    spec.reference_point.assign(reference.begin(), reference.end());
    spec.ideal_point = spec.reference_point;
    bool any = false;
    Vector lo(reference.size(), std::numeric_limits<double>::infinity());
    for (const auto& p : front) {
        if (!within_reference(p, reference)) continue;
        any = true;
        for (std::size_t i = 0; i < p.size(); ++i) lo[i] = std::min(lo[i], p[i]);
    }
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const double base = any ? lo[i] : reference[i];
        const double pad = margin * (reference[i] - base);
        spec.ideal_point[i] = pad > 0.0 ? base - pad : reference[i] - std::max(margin, 1e-9);
    }
    return spec;
}

double hypervolume_2d_exact(std::span<const Vector> front, std::span<const double> reference) {
    if (reference.size() != 2) throw ArgumentError("hypervolume_2d_exact needs a 2-D reference point");
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : front) {
        if (p.size() != 2) throw ArgumentError("hypervolume_2d_exact needs 2-D points");
        if (within_reference(p, reference)) pts.emplace_back(p[0], p[1]);
    }
    std::sort(pts.begin(), pts.end());
    double area = 0.0;
    double best_y = reference[1];
    for (const auto& [x, y] : pts) {
        if (y >= best_y) continue;
        area += (reference[0] - x) * (best_y - y);
        best_y = y;
    }
    return area;
}

HypervolumeEstimate hypervolume_mc(std::span<const Vector> front, const HypervolumeSpec& spec, std::uint64_t seed) {
    spec.validate();
    const std::size_t m = spec.reference_point.size();
    std::vector<Vector> pts;
    for (const auto& p : front) {
        if (p.size() != m) throw ArgumentError("hypervolume_mc: point dimension mismatch");
        if (within_reference(p, spec.reference_point)) pts.push_back(p);
    }
    if (pts.empty()) return {};
    {
        const auto keep = nondominated_indices(pts);
        std::vector<Vector> nd;
        for (auto i : keep) nd.push_back(pts[i]);
        pts = std::move(nd);
    }
    // Sorting by the first coordinate lets the scan stop early.
    std::sort(pts.begin(), pts.end());
    double volume = 1.0;
    for (std::size_t i = 0; i < m; ++i) volume *= spec.reference_point[i] - spec.ideal_point[i];

    constexpr std::size_t kChunk = 1 << 16;
    const std::size_t chunks = (spec.mc_samples + kChunk - 1) / kChunk;
    std::vector<std::size_t> hits(chunks, 0);
    const SeedTree tree(seed);
    parallel_for(chunks, [&](std::size_t c) {
        Rng rng = tree.rng("hv-chunk", c);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const std::size_t count = std::min(kChunk, spec.mc_samples - c * kChunk);
        Vector s(m);
        std::size_t h = 0;
        for (std::size_t k = 0; k < count; ++k) {
            for (std::size_t i = 0; i < m; ++i)
                s[i] = spec.ideal_point[i] + unit(rng) * (spec.reference_point[i] - spec.ideal_point[i]);
            for (const auto& p : pts) {
                if (p[0] > s[0]) break;
                bool covered = true;
                for (std::size_t i = 1; i < m; ++i)
                    if (p[i] > s[i]) {
                        covered = false;
                        break;
                    }
                if (covered) {
                    ++h;
                    break;
                }
            }
        }
        hits[c] = h;
    });
    const double n = static_cast<double>(spec.mc_samples);
    const double frac = static_cast<double>(std::accumulate(hits.begin(), hits.end(), std::size_t{0})) / n;
    return {volume * frac, volume * std::sqrt(frac * (1.0 - frac) / n)};
}

HypervolumeEstimate hypervolume(std::span<const Vector> front, std::span<const double> reference,
                                std::size_t mc_samples, std::uint64_t seed) {
    if (reference.size() == 2) return {hypervolume_2d_exact(front, reference), 0.0};
    auto spec = HypervolumeSpec::around(front, reference);
    spec.mc_samples = mc_samples;
    return hypervolume_mc(front, spec, seed);
}

std::vector<Vector> reference_front(int zdt_variant, std::size_t resolution) {
    if (resolution < 100) throw ArgumentError("reference front resolution must be >= 100");
    std::vector<Vector> pts(resolution);
    for (std::size_t i = 0; i < resolution; ++i) {
        const double x1 = static_cast<double>(i) / static_cast<double>(resolution - 1);
        const double x[2] = {x1, 0.0};
        pts[i] = zdt_point(zdt_variant, x);
    }
    const auto keep = nondominated_indices(pts);
    std::vector<Vector> out;
    out.reserve(keep.size());
    for (auto i : keep) out.push_back(pts[i]);
    return out;
}

Vector default_reference_point(const std::string& problem_name, std::size_t num_objectives) {
    if (problem_name.starts_with("zdt")) return Vector(2, 11.0);
    if (problem_name.starts_with("dtlz")) return Vector(num_objectives, 1.1);
    return {};
}

double mean_pairwise_distance(std::span<const Vector> points) {
    if (points.size() < 2) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < points[i].size(); ++k) d2 += (points[i][k] - points[j][k]) * (points[i][k] - points[j][k]);
            total += std::sqrt(d2);
        }
    const double pairs = static_cast<double>(points.size()) * static_cast<double>(points.size() - 1) / 2.0;
    return total / pairs;
}

}  // namespace lbnmobo
