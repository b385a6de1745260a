#pragma once

#include <cstdint>
#include <vector>

namespace tricklemac::analysis
{
    /// n synchronized nodes in one broadcast domain, k = 1, eta = 1/2, I_min = m * w.
    struct SingleHopModel
    {
        int n = 2;
        double m = 2.0;

        /// Throws std::invalid_argument unless n >= 2 and m >= 2.
        void validate() const;
    };

    struct AnalysisResult
    {
        double p_bo_2 = 0.0;             ///< back-off probability for two nodes (n-independent)
        std::vector<double> p_n_b;       ///< P(b back-offs), b = 0..n-1
        double p_bo_n = 0.0;             ///< P(at least one back-off)
        double expected_redundant = 0.0; ///< E[number of back-offs]
    };

    /// Exact binomial coefficient; throws std::overflow_error if it does not fit.
    std::uint64_t binomial(unsigned n, unsigned k);

    /// P(back-off) for two nodes: 2/m - 4/(3 m^2).
    double p_bo_2(double m);

    /// Integral of (1-z)^b z^q over [0, 1/2], via the binomial expansion of (1-z)^b.
    double incomplete_beta_half(unsigned b, unsigned q);

    /// P(exactly b of the n-1 non-first nodes back off).
    double p_n_b(int n, int b, double m);

    /// P(at least one back-off) = 1 - ((m-1)^n + 1/(2n-1)) / m^n.
    double p_bo_n(int n, double m);

    /// E[back-offs] = n/m - (2/m)^n / (n+1).
    double expected_redundant(int n, double m);

    AnalysisResult analyze(const SingleHopModel &model);
} // namespace tricklemac::analysis
