#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lbnmobo/metrics.hpp"

using namespace lbnmobo;

namespace {

// Union of axis-aligned boxes by inclusion-exclusion; fine for small fronts.
double hv_inclusion_exclusion(const std::vector<Vector>& pts, const Vector& ref) {
    const std::size_t n = pts.size();
    double total = 0.0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        Vector corner(ref.size(), -INFINITY);
        int bits = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) {
                ++bits;
                for (std::size_t k = 0; k < ref.size(); ++k) corner[k] = std::max(corner[k], pts[i][k]);
            }
        double vol = 1.0;
        for (std::size_t k = 0; k < ref.size(); ++k) vol *= std::max(0.0, ref[k] - corner[k]);
        total += (bits % 2 ? 1.0 : -1.0) * vol;
    }
    return total;
}

std::vector<Vector> random_front(Rng& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = u(rng);
        pts.push_back({a, (1.0 - a) * (0.5 + 0.5 * u(rng))});
    }
    return pts;
}

}  // namespace

TEST_CASE("exact 2-D hypervolume examples") {
    CHECK(hypervolume_2d_exact(std::vector<Vector>{{1, 2}, {2, 1}}, Vector{3, 3}) == doctest::Approx(3.0));
    CHECK(hypervolume_2d_exact(std::vector<Vector>{{0, 0}}, Vector{1, 1}) == doctest::Approx(1.0));
    CHECK(hypervolume_2d_exact(std::vector<Vector>{{1, 2}, {2, 1}, {2.5, 2.5}}, Vector{3, 3}) == doctest::Approx(3.0));
    CHECK(hypervolume_2d_exact(std::vector<Vector>{}, Vector{3, 3}) == 0.0);
    CHECK(hypervolume_2d_exact(std::vector<Vector>{{4, 0}}, Vector{3, 3}) == 0.0);
}

TEST_CASE("exact 2-D hypervolume equals inclusion-exclusion") {
    Rng rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pts = random_front(rng, 1 + trial % 10);
        const Vector ref{1.1, 1.2};
        CHECK(hypervolume_2d_exact(pts, ref) == doctest::Approx(hv_inclusion_exclusion(pts, ref)).epsilon(1e-12));
    }
}

TEST_CASE("exact 2-D hypervolume monotonicity and scale covariance") {
    Rng rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        auto pts = random_front(rng, 8);
        const Vector ref{1.5, 1.5};
        const double base = hypervolume_2d_exact(pts, ref);
        auto more = pts;
        more.push_back({u(rng), u(rng)});
        CHECK(hypervolume_2d_exact(more, ref) >= base);

        const double dx = u(rng) * 10 - 5, dy = u(rng) * 10 - 5, s = 0.1 + 3 * u(rng);
        auto shifted = pts;
        for (auto& p : shifted) p = {p[0] + dx, p[1] + dy};
        CHECK(hypervolume_2d_exact(shifted, Vector{ref[0] + dx, ref[1] + dy}) == doctest::Approx(base).epsilon(1e-10));
        auto scaled = pts;
        for (auto& p : scaled) p[1] *= s;
        CHECK(hypervolume_2d_exact(scaled, Vector{ref[0], ref[1] * s}) == doctest::Approx(base * s).epsilon(1e-10));
    }
}

TEST_CASE("Monte-Carlo estimate agrees with the exact value within 3 standard errors") {
    Rng rng(3);
    int inside = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto pts = random_front(rng, 3 + trial % 20);
        const Vector ref{1.1, 1.1};
        auto spec = HypervolumeSpec::around(pts, ref);
        spec.mc_samples = 200000;
        const auto est = hypervolume_mc(pts, spec, 1000 + trial);
        const double exact = hypervolume_2d_exact(pts, ref);
        CHECK(est.std_error > 0.0);
        CHECK(std::abs(est.estimate - exact) <= 3.0 * est.std_error);
        inside += std::abs(est.estimate - exact) <= est.std_error;
    }
    // Roughly 68% should land within one standard error.
    CHECK(inside >= 25);
}

TEST_CASE("Monte-Carlo degenerate fronts") {
    HypervolumeSpec spec;
    spec.reference_point = {2.0, 3.0, 4.0};
    spec.ideal_point = {0.0, 1.0, 1.0};
    spec.mc_samples = 10000;
    const auto full = hypervolume_mc(std::vector<Vector>{spec.ideal_point}, spec, 1);
    CHECK(full.estimate == doctest::Approx(2.0 * 2.0 * 3.0));
    CHECK(full.std_error == 0.0);
    const auto none = hypervolume_mc(std::vector<Vector>{}, spec, 1);
    CHECK(none.estimate == 0.0);
    CHECK(none.std_error == 0.0);
    spec.ideal_point = {2.0, 1.0, 1.0};
    CHECK_THROWS_AS(spec.validate(), ArgumentError);
}

TEST_CASE("Monte-Carlo standard error scales as one over root n") {
    const std::vector<Vector> front{{0.2, 0.7, 0.5}, {0.6, 0.3, 0.4}, {0.4, 0.4, 0.9}};
    const Vector ref{1.0, 1.0, 1.0};
    auto spec = HypervolumeSpec::around(front, ref);
    spec.mc_samples = 250000;
    const auto base = hypervolume_mc(front, spec, 5);
    spec.mc_samples = 1000000;
    const auto quad = hypervolume_mc(front, spec, 6);
    spec.mc_samples = 500000;
    const auto dbl = hypervolume_mc(front, spec, 7);
    CHECK(quad.std_error / base.std_error == doctest::Approx(0.5).epsilon(0.02));
    CHECK(dbl.std_error / base.std_error == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.02));
}

TEST_CASE("Monte-Carlo estimate does not depend on the worker count") {
    const std::vector<Vector> front{{0.2, 0.7, 0.5}, {0.6, 0.3, 0.4}};
    auto spec = HypervolumeSpec::around(front, Vector{1.0, 1.0, 1.0});
    spec.mc_samples = 300000;
    set_max_threads(1);
    const auto a = hypervolume_mc(front, spec, 9);
    set_max_threads(3);
    const auto b = hypervolume_mc(front, spec, 9);
    set_max_threads(0);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
}

TEST_CASE("hypervolume box corner sits 5% below the front") {
    const std::vector<Vector> front{{0.0, 1.0}, {1.0, 0.0}};
    const auto spec = HypervolumeSpec::around(front, Vector{2.0, 2.0});
    CHECK(spec.ideal_point[0] == doctest::Approx(-0.1));
    CHECK(spec.ideal_point[1] == doctest::Approx(-0.1));
}

TEST_CASE("reference fronts") {
    for (std::size_t res : {100u, 1000u, 10000u}) {
        const auto z1 = reference_front(1, res);
        CHECK(z1.size() == res);
        for (const auto& p : z1) CHECK(std::abs(p[1] - (1.0 - std::sqrt(p[0]))) <= 1e-12);
        const auto z2 = reference_front(2, res);
        for (const auto& p : z2) CHECK(std::abs(p[1] - (1.0 - p[0] * p[0])) <= 1e-12);
    }
    const auto z3 = reference_front(3, 10000);
    int segments = 1;
    for (std::size_t i = 1; i < z3.size(); ++i)
        if (z3[i][0] - z3[i - 1][0] > 10.0 / 9999.0) ++segments;
    CHECK(segments == 5);
    CHECK_THROWS_AS(reference_front(1, 99), ArgumentError);
}

TEST_CASE("default reference points") {
    CHECK(default_reference_point("zdt3", 2) == Vector{11.0, 11.0});
    CHECK(default_reference_point("dtlz1", 3) == Vector{1.1, 1.1, 1.1});
    CHECK(default_reference_point("external", 2).empty());
}

TEST_CASE("mean pairwise distance") {
    CHECK(mean_pairwise_distance(std::vector<Vector>{{0, 0}, {3, 4}}) == doctest::Approx(5.0));
    CHECK(mean_pairwise_distance(std::vector<Vector>{{0, 0}, {1, 0}, {0, 1}}) ==
          doctest::Approx((1.0 + 1.0 + std::sqrt(2.0)) / 3.0));
    CHECK(mean_pairwise_distance(std::vector<Vector>{{1, 1}}) == 0.0);
}
