#pragma once

#include <array>
#include <cstdint>

namespace slv {

/// Counter-based random stream (Philox4x32-10).
///
/// Two streams with distinct (seed, stream_id) pairs produce statistically
/// independent sequences, and a stream's output depends only on (seed,
/// stream_id, position), never on scheduling.  This is what makes Monte Carlo
/// results independent of the worker-pool size: replica k always draws from
/// stream k regardless of which thread runs it.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_(stream_id) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    /// Child stream in the caller's private namespace.  `fork` partitions the
    /// id space by stream_id -> 4*stream_id + lane, so distinct parents have
    /// disjoint lane families; callers must not mix raw ids with forked ones.
    RngStream fork(std::uint32_t lane) const {
        return RngStream(seed_, stream_ * 4u + (lane & 3u));
    }

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    /// Uniform variate in the open interval (0,1).
    double uniform01();

  private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    unsigned idx_ = 4; // buffer exhausted
};

/// Standard normal variate; consumes exactly two uniforms (Box-Muller).
double sample_gaussian(RngStream& rng);

} // namespace slv
