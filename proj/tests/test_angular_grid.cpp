#include <doctest.h>

#include "aq/angular_grid.hpp"

#include <cmath>
#include <numeric>

using namespace aq;

namespace {

// exact integral of e^{i q phi} over [lo, hi]
Complex exact_arc_integral(double lo, double hi, int q) {
    if (q == 0) return {hi - lo, 0.0};
    return (std::polar(1.0, q * hi) - std::polar(1.0, q * lo)) / Complex(0.0, q);
}

}  // namespace

TEST_CASE("grid cells cover the circle") {
    const AngularGrid plain(64);
    CHECK(plain.nodes().size() == 64);
    const auto w = plain.weights();
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(kTwoPi).epsilon(1e-14));

    const double cuts[] = {0.1, -2.0, 0.1, kPi, -kPi};
    const AngularGrid split(64, cuts);
    // 0.1 and -2.0 each split one cell; duplicates and the ends add nothing
    CHECK(split.nodes().size() == 66);
    const auto ws = split.weights();
    CHECK(std::accumulate(ws.begin(), ws.end(), 0.0) == doctest::Approx(kTwoPi).epsilon(1e-14));
    for (std::size_t i = 1; i < split.nodes().size(); ++i) CHECK(split.nodes()[i - 1] < split.nodes()[i]);

    CHECK_THROWS_AS(AngularGrid(0), InvalidArgument);
}

TEST_CASE("angular modes") {
    const ApertureMask mask(2, 0.6, kPi);
    const AngularMode m = angular_mode(mask, SlitIndex::from_twice(1), OamIndex{3});
    CHECK(std::abs(m(kPi / 2) - std::polar(1.0 / std::sqrt(kTwoPi), 3 * kPi / 2)) < 1e-15);
    CHECK(m(-kPi / 2) == Complex(0.0, 0.0));
    CHECK(m(kPi / 2 + 0.31) == Complex(0.0, 0.0));

    const AngularMode modes[] = {m, angular_mode(mask, SlitIndex::from_twice(-1), OamIndex{0})};
    const auto bp = breakpoints_of(modes);
    REQUIRE(bp.size() == 4);
    CHECK(bp[0] == doctest::Approx(-kPi / 2 - 0.3));
    CHECK(bp[3] == doctest::Approx(kPi / 2 + 0.3));
}

TEST_CASE("quadrature of slit overlaps against exact arc integrals") {
    const ApertureMask mask(3, 0.9, 1.7, 0.25);
    for (SlitIndex j : mask.slits()) {
        for (SlitIndex k : mask.slits()) {
            for (auto [m, l] : {std::pair{0, 0}, std::pair{1, -2}, std::pair{3, 3}}) {
                Complex exact{0.0, 0.0};
                if (j == k) {
                    for (const Arc& a : mask.support(k)) exact += exact_arc_integral(a.lo, a.hi, l - m);
                    exact /= kTwoPi;
                }
                const Complex quad = quadrature_overlap(mask, j, OamIndex{m}, k, OamIndex{l}, 1 << 12);
                CHECK(std::abs(quad - exact) < 1e-6);
            }
        }
    }
}

TEST_CASE("sampled modes reproduce the overlap") {
    const ApertureMask mask = ApertureMask::single(2.0, 2.9);  // wraps across -pi
    const AngularMode modes[] = {angular_mode(mask, SlitIndex::from_integer(0), OamIndex{-1}),
                                 angular_mode(mask, SlitIndex::from_integer(0), OamIndex{2})};
    const AngularGrid grid(1 << 12, breakpoints_of(modes));
    const CMatrix s = grid.sample(modes);
    const CMatrix g = s.adjoint() * s;
    CHECK(std::abs(g(0, 0) - 2.0 / kTwoPi) < 1e-12);
    CHECK(std::abs(g(0, 1) - grid.overlap(modes[0], modes[1])) < 1e-13);
    CHECK(std::abs(g(0, 1) - exact_arc_integral(2.9 - 1.0, 2.9 + 1.0, 3) / kTwoPi) < 1e-6);
}
