#include "ariswpc/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ariswpc/channel.hpp"
#include "ariswpc/kernels.hpp"
#include "ariswpc/sysmodel.hpp"

namespace ariswpc::montecarlo {

namespace {

constexpr long long kChunkTrials = 4096;
constexpr double kZ95 = 1.959963984540054;

// Run fn(chunk_index, first_trial, last_trial) over all chunks using the
// requested worker count. Chunk results must be stored by index by the
// callback; the caller combines them in chunk order afterwards.
template <typename Fn>
void for_each_chunk(long long trials, int workers, const Fn& fn) {
    const long long n_chunks = (trials + kChunkTrials - 1) / kChunkTrials;
    std::atomic<long long> next{0};
    auto worker_loop = [&]() {
        for (;;) {
            const long long chunk = next.fetch_add(1, std::memory_order_relaxed);
            if (chunk >= n_chunks) {
                return;
            }
            const long long first = chunk * kChunkTrials;
            const long long last = std::min(trials, first + kChunkTrials);
            fn(chunk, first, last);
        }
    };
    const int n_workers = static_cast<int>(
        std::min<long long>(std::max(1, workers), n_chunks));
    if (n_workers <= 1) {
        worker_loop();
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) {
        threads.emplace_back(worker_loop);
    }
    for (auto& t : threads) {
        t.join();
    }
}

}  // namespace

OutageEstimate estimate_outage(const params::SystemParams& p,
                               const params::DerivedParams& d,
                               const McConfig& mc) {
    if (mc.trials < 1) {
        throw std::invalid_argument("estimate_outage: trials must be >= 1");
    }
    if (mc.workers < 1) {
        throw std::invalid_argument("estimate_outage: workers must be >= 1");
    }
    const auto report = params::validate(p);
    if (!report.pass) {
        throw std::invalid_argument("estimate_outage: invalid parameters");
    }

    const long long n_chunks = (mc.trials + kChunkTrials - 1) / kChunkTrials;
    std::vector<long long> chunk_counts(static_cast<std::size_t>(n_chunks), 0);
    for_each_chunk(mc.trials, mc.workers, [&](long long chunk, long long first, long long last) {
        channel::ChannelRealization real;
        long long count = 0;
        for (long long trial = first; trial < last; ++trial) {
            const channel::Substream stream{mc.seed, static_cast<std::uint64_t>(trial)};
            channel::sample_realization_into(stream, p.m, real);
            const sysmodel::SnrSample sample = sysmodel::snr(p, d, real);
            if (sysmodel::outage_indicator(sample, p.r_rate)) {
                ++count;
            }
        }
        chunk_counts[static_cast<std::size_t>(chunk)] = count;
    });

    long long outages = 0;
    for (const long long count : chunk_counts) {
        outages += count;
    }

    OutageEstimate est;
    est.trials = mc.trials;
    est.seed = mc.seed;
    est.p_hat = static_cast<double>(outages) / static_cast<double>(mc.trials);
    est.std_err = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(mc.trials));
    est.ci95_lo = std::max(0.0, est.p_hat - kZ95 * est.std_err);
    est.ci95_hi = std::min(1.0, est.p_hat + kZ95 * est.std_err);
    return est;
}

CascadeMoments estimate_cascade_moments(int m, long long trials, std::uint64_t seed) {
    if (m < 1) {
        throw std::invalid_argument("estimate_cascade_moments: m must be >= 1");
    }
    if (trials < 2) {
        throw std::invalid_argument("estimate_cascade_moments: trials must be >= 2");
    }

    const long long n_chunks = (trials + kChunkTrials - 1) / kChunkTrials;
    std::vector<kernels::MomentSums> chunk_sums(static_cast<std::size_t>(n_chunks));
    for_each_chunk(trials, 1, [&](long long chunk, long long first, long long last) {
        channel::ChannelRealization real;
        std::vector<double> values;
        values.reserve(static_cast<std::size_t>(last - first));
        for (long long trial = first; trial < last; ++trial) {
            const channel::Substream stream{seed, static_cast<std::uint64_t>(trial)};
            channel::sample_realization_into(stream, m, real);
            values.push_back(channel::cascaded_gain_aligned(real.h2, real.h3));
        }
        chunk_sums[static_cast<std::size_t>(chunk)] =
            kernels::moment_accumulate(values.data(), values.size());
    });

    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& part : chunk_sums) {
        sum += part.sum;
        sum_sq += part.sum_sq;
    }

    const auto n = static_cast<double>(trials);
    CascadeMoments out;
    out.mean = sum / n;
    out.variance = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
    out.stderr_mean = std::sqrt(out.variance / n);
    return out;
}

}  // namespace ariswpc::montecarlo
