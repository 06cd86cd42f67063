#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <stop_token>
#include <thread>
#include <vector>

#include "affwalk/estimate.hpp"
#include "affwalk/rng.hpp"

namespace affwalk {

struct Cancelled : std::runtime_error {
  Cancelled() : std::runtime_error("computation cancelled") {}
};

/// Samples per RNG stream. Fixed, so stream b always covers the same samples
/// whatever the worker count.
inline constexpr std::uint64_t kSamplesPerStream = 1024;

/// Runs fn(batch_index) for every batch on a pool of `workers` threads and
/// returns the results indexed by batch. Cancellation is checked between
/// batches.
template <class Result>
std::vector<Result> run_batches(std::size_t batches, unsigned workers,
                                const std::function<Result(std::size_t)>& fn,
                                std::stop_token stop = {}) {
  std::vector<Result> results(batches);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      if (stop.stop_requested()) {
        return;
      }
      const std::size_t b = next.fetch_add(1);
      if (b >= batches) {
        return;
      }
      try {
        results[b] = fn(b);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
        next.store(batches);
        return;
      }
    }
  };
  const unsigned pool = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(batches)));
  if (pool == 1) {
    work();
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(pool);
    for (unsigned w = 0; w < pool; ++w) {
      threads.emplace_back(work);
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  if (stop.stop_requested()) {
    throw Cancelled();
  }
  return results;
}

struct ParallelOptions {
  unsigned workers = 1;
  std::stop_token stop{};
};

/// Mean of `samples` i.i.d. draws of sampler(rng). Stream b uses
/// Philox4x64(seed, b) for samples [b * kSamplesPerStream, ...).
template <class Sampler>
EstimateWithError monte_carlo_mean(std::uint64_t samples, std::uint64_t seed, Sampler sampler,
                                   const ParallelOptions& opts = {}) {
  if (samples == 0) {
    throw std::invalid_argument("monte_carlo_mean: zero samples");
  }
  const std::size_t streams = (samples + kSamplesPerStream - 1) / kSamplesPerStream;
  auto parts = run_batches<RunningMoments>(
      streams, opts.workers,
      [&](std::size_t b) {
        Philox4x64 rng(seed, b);
        const std::uint64_t first = b * kSamplesPerStream;
        const std::uint64_t count = std::min(kSamplesPerStream, samples - first);
        RunningMoments m;
        auto local = sampler;
        for (std::uint64_t i = 0; i < count; ++i) {
          m.add(local(rng));
        }
        return m;
      },
      opts.stop);
  return merge_in_order(parts).to_estimate(seed);
}

/// Several means (plus running min / max) from one sampler that writes
/// `channels` values per draw into out[0..channels).
struct MultiEstimate {
  std::vector<EstimateWithError> means;
  std::vector<double> mins;
  std::vector<double> maxs;
};

template <class Sampler>
MultiEstimate monte_carlo_multi(std::uint64_t samples, std::uint64_t seed, std::size_t channels,
                                Sampler sampler, const ParallelOptions& opts = {}) {
  if (samples == 0) {
    throw std::invalid_argument("monte_carlo_multi: zero samples");
  }
  struct Part {
    std::vector<RunningMoments> m;
    std::vector<double> lo;
    std::vector<double> hi;
  };
  const std::size_t streams = (samples + kSamplesPerStream - 1) / kSamplesPerStream;
  auto parts = run_batches<Part>(
      streams, opts.workers,
      [&](std::size_t b) {
        Philox4x64 rng(seed, b);
        const std::uint64_t first = b * kSamplesPerStream;
        const std::uint64_t count = std::min(kSamplesPerStream, samples - first);
        Part part{std::vector<RunningMoments>(channels),
                  std::vector<double>(channels, std::numeric_limits<double>::infinity()),
                  std::vector<double>(channels, -std::numeric_limits<double>::infinity())};
        std::vector<double> out(channels);
        auto local = sampler;
        for (std::uint64_t i = 0; i < count; ++i) {
          local(rng, out.data());
          for (std::size_t c = 0; c < channels; ++c) {
            part.m[c].add(out[c]);
            part.lo[c] = std::min(part.lo[c], out[c]);
            part.hi[c] = std::max(part.hi[c], out[c]);
          }
        }
        return part;
      },
      opts.stop);
  MultiEstimate result;
  for (std::size_t c = 0; c < channels; ++c) {
    std::vector<RunningMoments> column;
    column.reserve(parts.size());
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& part : parts) {
      column.push_back(part.m[c]);
      lo = std::min(lo, part.lo[c]);
      hi = std::max(hi, part.hi[c]);
    }
    result.means.push_back(merge_in_order(column).to_estimate(seed));
    result.mins.push_back(lo);
    result.maxs.push_back(hi);
  }
  return result;
}

}  // namespace affwalk
