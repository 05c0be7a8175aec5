#include <doctest.h>

#include <cmath>
#include <vector>

#include "ness/rng.hpp"
#include "ness/stats.hpp"

using namespace ness;

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) ==
          C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(Philox4x32::block(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                            K{0xffffffffu, 0xffffffffu}) ==
          C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(Philox4x32::block(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                            K{0xa4093822u, 0x299f31d0u}) ==
          C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("Philox streams are reproducible and distinct") {
    Philox4x32 a(42, 0), b(42, 0), c(42, 1), d(43, 0);
    std::vector<std::uint32_t> va, vb, vc, vd;
    for (int i = 0; i < 16; ++i) {
        va.push_back(a());
        vb.push_back(b());
        vc.push_back(c());
        vd.push_back(d());
    }
    CHECK(va == vb);
    CHECK(va != vc);
    CHECK(va != vd);
}

TEST_CASE("batch means") {
    BatchMeans bm(2, 2);
    const double data[][2] = {{1, 10}, {3, 10}, {5, 20}, {7, 20}, {100, 100}};
    for (const auto& s : data) bm.add(s);
    CHECK(bm.batch_count() == 2);  // trailing partial batch dropped
    CHECK(bm.mean(0) == doctest::Approx(4.0));
    CHECK(bm.mean(1) == doctest::Approx(15.0));
    // batch means 2 and 6: sd = 2 sqrt(2), se = sd / sqrt(2) = 2
    CHECK(bm.standard_error(0) == doctest::Approx(2.0));

    BatchMeans other(2, 2);
    const double more[][2] = {{0, 0}, {0, 0}};
    for (const auto& s : more) other.add(s);
    bm.merge(other);
    CHECK(bm.batch_count() == 3);
    CHECK(bm.mean(0) == doctest::Approx(8.0 / 3.0));

    const double bad[3] = {1, 2, 3};
    CHECK_THROWS(bm.add(bad));
    CHECK_THROWS(bm.merge(BatchMeans(3, 2)));
    CHECK_THROWS(BatchMeans(2, 0));
}

TEST_CASE("sample statistics and Richardson extrapolation") {
    const std::vector<double> xs{1, 2, 3, 4};
    const SampleStats s = sample_stats(xs);
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.se == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    // a + b/n is recovered exactly at order 1, a + b/n^2 at order 2
    CHECK(richardson(64, 3 + 2.0 / 64, 128, 3 + 2.0 / 128) == doctest::Approx(3.0));
    CHECK(richardson(10, 1 + 5.0 / 100, 20, 1 + 5.0 / 400, 2.0) == doctest::Approx(1.0));
}
