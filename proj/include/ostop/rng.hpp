#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace ostop {

/// Counter-based random stream (Philox4x32-10).
///
/// A stream is addressed by (seed, stream id); distinct ids give
/// statistically independent substreams, so one stream per Monte Carlo
/// path makes results bit-reproducible and independent of how paths are
/// distributed over workers. The 128-bit counter is
/// (block index, stream id), the 64-bit key is the seed.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    std::uint32_t next_u32() {
        if (pos_ == 4) refill();
        return buf_[pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return lo | (hi << 32);
    }

    /// Uniform in the open interval (0, 1) with 53-bit resolution.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    /// Standard normal via the ziggurat method (128 strips, Marsaglia
    /// tail for |z| beyond the base strip).
    double next_normal();

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static void round(std::array<std::uint32_t, 4>& ctr,
                      const std::array<std::uint32_t, 2>& key) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }

    void refill() {
        std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(block_),
            static_cast<std::uint32_t>(block_ >> 32),
            static_cast<std::uint32_t>(stream_),
            static_cast<std::uint32_t>(stream_ >> 32)};
        std::array<std::uint32_t, 2> key = key_;
        for (int r = 0; r < 10; ++r) {
            if (r > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            round(ctr, key);
        }
        buf_ = ctr;
        ++block_;
        pos_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
};

namespace detail {

// Ziggurat layer tables for the standard normal (Doornik layout):
// x[0] > x[1] = R > ... > x[128] = 0, each layer of equal area.
struct ZigguratTables {
    static constexpr int kStrips = 128;
    double x[kStrips + 1];
    double ratio[kStrips];

    ZigguratTables() {
        constexpr double r = 3.442619855899;
        constexpr double v = 9.91256303526217e-3;
        double f = std::exp(-0.5 * r * r);
        x[0] = v / f;
        x[1] = r;
        for (int i = 2; i < kStrips; ++i) {
            x[i] = std::sqrt(-2.0 * std::log(v / x[i - 1] + f));
            f = std::exp(-0.5 * x[i] * x[i]);
        }
        x[kStrips] = 0.0;
        for (int i = 0; i < kStrips; ++i) ratio[i] = x[i + 1] / x[i];
    }
};

inline const ZigguratTables& ziggurat() {
    static const ZigguratTables tables;
    return tables;
}

}  // namespace detail

inline double RngStream::next_normal() {
    const auto& t = detail::ziggurat();
    for (;;) {
        const std::uint64_t bits = next_u64();
        const int i = static_cast<int>(bits & 127u);
        // Top 53 bits give u uniform in (-1, 1); the low 7 bits picking
        // the strip are disjoint from them.
        const double u =
            (static_cast<double>(bits >> 11) + 0.5) * 0x1p-52 - 1.0;
        if (std::fabs(u) < t.ratio[i]) return u * t.x[i];
        if (i == 0) {
            // Base strip: sample the tail beyond R.
            const double r = t.x[1];
            double xx, yy;
            do {
                xx = -std::log(next_uniform()) / r;
                yy = -std::log(next_uniform());
            } while (yy + yy < xx * xx);
            return u > 0.0 ? r + xx : -(r + xx);
        }
        const double z = u * t.x[i];
        const double zz = z * z;
        const double f0 = std::exp(-0.5 * (t.x[i] * t.x[i] - zz));
        const double f1 = std::exp(-0.5 * (t.x[i + 1] * t.x[i + 1] - zz));
        if (f0 + next_uniform() * (f1 - f0) < 1.0) return z;
    }
}

}  // namespace ostop
