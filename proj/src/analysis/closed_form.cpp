#include "tricklemac/analysis/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tricklemac::analysis
{
    namespace
    {
        void require_m(double m)
        {
            if (!(m >= 2.0) || !std::isfinite(m))
            {
                throw std::invalid_argument("m must be a finite value >= 2 (got " + std::to_string(m) + ")");
            }
        }

        void require_n(int n)
        {
            if (n < 2 || n > 64)
            {
                throw std::invalid_argument("n must lie in [2, 64] (got " + std::to_string(n) + ")");
            }
        }
    } // namespace

    void SingleHopModel::validate() const
    {
        require_n(n);
        require_m(m);
    }

    std::uint64_t binomial(unsigned n, unsigned k)
    {
        if (k > n)
        {
            return 0;
        }
        k = std::min(k, n - k);
        // Multiplicative form; every partial product is itself a binomial coefficient.
        std::uint64_t c = 1;
        for (unsigned i = 1; i <= k; ++i)
        {
            const std::uint64_t g = std::gcd(c, std::uint64_t{i});
            const std::uint64_t factor = (n - k + i) / (i / g);
            if (__builtin_mul_overflow(c / g, factor, &c))
            {
                throw std::overflow_error("binomial coefficient overflows 64 bits");
            }
        }
        return c;
    }

    double p_bo_2(double m)
    {
        require_m(m);
        return 2.0 / m - 4.0 / (3.0 * m * m);
    }

    double incomplete_beta_half(unsigned b, unsigned q)
    {
        double sum = 0.0;
        for (unsigned j = 0; j <= b; ++j)
        {
            const double term = static_cast<double>(binomial(b, j)) * std::ldexp(1.0, -static_cast<int>(q + j + 1)) /
                                static_cast<double>(q + j + 1);
            sum += (j % 2 == 0) ? term : -term;
        }
        return sum;
    }

    double p_n_b(int n, int b, double m)
    {
        require_n(n);
        require_m(m);
        if (b < 0 || b > n - 1)
        {
            throw std::invalid_argument("b must lie in [0, n-1]");
        }
        const auto un = static_cast<unsigned>(n);
        const auto ub = static_cast<unsigned>(b);
        // t_1 <= I_min - w: every other node's reception falls inside the interval.
        const double early = static_cast<double>(binomial(un, ub)) * (std::pow(m - 1.0, n - b) - 1.0) / std::pow(m, n);
        // t_1 > I_min - w: substitution z = (I_min - t_1) / (2w).
        const double late = static_cast<double>(n) * static_cast<double>(binomial(un - 1, ub)) * std::pow(4.0 / m, n) *
                            incomplete_beta_half(ub, 2 * un - ub - 2);
        return early + late;
    }

    double p_bo_n(int n, double m)
    {
        require_n(n);
        require_m(m);
        if (n == 2)
        {
            // Same value, but keep the two entry points bit-identical.
            return p_bo_2(m);
        }
        return 1.0 - (std::pow(m - 1.0, n) + 1.0 / (2.0 * n - 1.0)) / std::pow(m, n);
    }

    double expected_redundant(int n, double m)
    {
        require_n(n);
        require_m(m);
        return n / m - std::pow(2.0 / m, n) / (n + 1.0);
    }

    AnalysisResult analyze(const SingleHopModel &model)
    {
        model.validate();
        AnalysisResult r;
        r.p_bo_2 = p_bo_2(model.m);
        r.p_n_b.reserve(static_cast<std::size_t>(model.n));
        for (int b = 0; b < model.n; ++b)
        {
            r.p_n_b.push_back(p_n_b(model.n, b, model.m));
        }
        r.p_bo_n = p_bo_n(model.n, model.m);
        r.expected_redundant = expected_redundant(model.n, model.m);
        return r;
    }
} // namespace tricklemac::analysis
