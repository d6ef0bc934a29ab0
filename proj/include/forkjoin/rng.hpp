#pragma once

#include <cstdint>

#include "forkjoin/special_functions.hpp"

namespace forkjoin {

/// Philox4x32-10 counter-based stream. Every output is a pure function of
/// (seed, stream, position), so replications can be assigned disjoint
/// streams and produce identical results under any execution schedule.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)),
          stream_lo_(static_cast<std::uint32_t>(stream)),
          stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

    std::uint32_t next_u32() {
        if (buf_pos_ == 4) refill();
        return buf_[buf_pos_++];
    }

    /// 53-bit uniform in (0,1).
    double uniform() {
        const std::uint64_t hi = next_u32();
        const std::uint64_t lo = next_u32();
        const std::uint64_t bits = (hi << 32) | lo;
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via inverse cdf of a 53-bit uniform.
    double normal() { return std_normal_quantile_fast(uniform()); }

    /// Standard normal from a 32-bit uniform; resolution 2^-32 is ample for
    /// path increments and halves the generator work.
    double normal32() {
        return std_normal_quantile_fast((static_cast<double>(next_u32()) + 0.5) * 0x1.0p-32);
    }

private:
    static void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                          std::uint32_t& lo) {
        const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
        hi = static_cast<std::uint32_t>(p >> 32);
        lo = static_cast<std::uint32_t>(p);
    }

    void refill() {
        constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
        constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
        std::uint32_t c0 = static_cast<std::uint32_t>(counter_);
        std::uint32_t c1 = static_cast<std::uint32_t>(counter_ >> 32);
        std::uint32_t c2 = stream_lo_, c3 = stream_hi_;
        std::uint32_t k0 = key0_, k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            std::uint32_t hi0, lo0, hi1, lo1;
            mul_hi_lo(kM0, c0, hi0, lo0);
            mul_hi_lo(kM1, c2, hi1, lo1);
            const std::uint32_t n0 = hi1 ^ c1 ^ k0;
            const std::uint32_t n1 = lo1;
            const std::uint32_t n2 = hi0 ^ c3 ^ k1;
            const std::uint32_t n3 = lo0;
            c0 = n0; c1 = n1; c2 = n2; c3 = n3;
            k0 += kW0; k1 += kW1;
        }
        buf_[0] = c0; buf_[1] = c1; buf_[2] = c2; buf_[3] = c3;
        buf_pos_ = 0;
        ++counter_;
    }

    std::uint32_t key0_, key1_;
    std::uint32_t stream_lo_, stream_hi_;
    std::uint64_t counter_ = 0;
    std::uint32_t buf_[4] = {};
    int buf_pos_ = 4;
};

/// Stream-id layout: a domain (purpose within a run), a kind (sub-purpose),
/// and a 32-bit replication index.
inline std::uint64_t make_stream_id(std::uint64_t domain, std::uint64_t kind,
                                    std::uint64_t index) {
    return (domain << 40) ^ (kind << 32) ^ index;
}

}  // namespace forkjoin
