#include "tricklemac/analysis/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tricklemac::analysis
{
    McResult mc_single_hop(int n, double m, std::uint64_t reps, des::RngStream &rng)
    {
        if (n < 2)
        {
            throw std::invalid_argument("mc_single_hop: n must be >= 2");
        }
        if (!(m > 0.0))
        {
            throw std::invalid_argument("mc_single_hop: m must be positive");
        }
        if (reps < 1)
        {
            throw std::invalid_argument("mc_single_hop: reps must be >= 1");
        }

        McResult r;
        r.n = n;
        r.m = m;
        r.reps = reps;
        r.counts.assign(static_cast<std::size_t>(n), 0);

        std::vector<double> t(static_cast<std::size_t>(n));
        double sum_b = 0.0;
        double sum_b2 = 0.0;
        for (std::uint64_t rep = 0; rep < reps; ++rep)
        {
            std::size_t first = 0;
            for (std::size_t i = 0; i < t.size(); ++i)
            {
                t[i] = des::uniform(rng, m / 2.0, m);
                if (t[i] < t[first])
                {
                    first = i;
                }
            }
            const double t_first = t[first];
            int b = 0;
            for (std::size_t i = 0; i < t.size(); ++i)
            {
                if (i == first)
                {
                    continue;
                }
                const double reception = t_first + des::uniform(rng, 0.0, 1.0);
                if (t[i] >= t_first && t[i] <= reception)
                {
                    ++b;
                }
            }
            ++r.counts[static_cast<std::size_t>(b)];
            sum_b += b;
            sum_b2 += static_cast<double>(b) * b;
        }

        const auto N = static_cast<double>(reps);
        for (std::uint64_t c : r.counts)
        {
            const double p = static_cast<double>(c) / N;
            r.freq.push_back(p);
            r.freq_se.push_back(std::sqrt(p * (1.0 - p) / N));
        }
        r.p_backoff = 1.0 - r.freq[0];
        r.p_backoff_se = r.freq_se[0];
        r.mean_b = sum_b / N;
        const double var = reps > 1 ? (sum_b2 - N * r.mean_b * r.mean_b) / (N - 1.0) : 0.0;
        r.mean_b_se = std::sqrt(std::max(var, 0.0) / N);
        return r;
    }
} // namespace tricklemac::analysis
