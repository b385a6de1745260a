#pragma once

#include "tricklemac/des/random.hpp"

#include <cstdint>
#include <vector>

namespace tricklemac::analysis
{
    struct McResult
    {
        int n = 0;
        double m = 0.0;
        std::uint64_t reps = 0;
        std::vector<std::uint64_t> counts; ///< replications with exactly b back-offs
        std::vector<double> freq;          ///< counts / reps
        std::vector<double> freq_se;       ///< binomial standard error of freq
        double p_backoff = 0.0;            ///< fraction with b >= 1
        double p_backoff_se = 0.0;
        double mean_b = 0.0;
        double mean_b_se = 0.0;
    };

    /// Samples the abstract single-hop model directly, in units of w: every node
    /// draws t_i ~ U[m/2, m]; the first sender f is the argmin; every other node
    /// draws its own reception time t_f + U[0, 1] and backs off iff its t_i falls
    /// in [t_f, reception].
    McResult mc_single_hop(int n, double m, std::uint64_t reps, des::RngStream &rng);
} // namespace tricklemac::analysis
