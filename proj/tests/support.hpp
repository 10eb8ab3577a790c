#ifndef SPRONY_TESTS_SUPPORT_HPP
#define SPRONY_TESTS_SUPPORT_HPP

#include <random>
#include <vector>

#include "sprony/numeric.hpp"
#include "sprony/prony.hpp"

namespace sprony::test
{

inline bool close(const Real& a, const Real& b, const Real& tol)
{
    return abs(a - b) <= tol;
}

inline bool close(const Complex& a, const Complex& b, const Real& tol)
{
    return magnitude(a - b) <= tol;
}

inline bool rel_close(const Real& a, const Real& b, const Real& tol)
{
    return abs(a - b) <= tol * abs(b);
}

inline double d(const Real& x) { return to_double(x); }

class Rng
{
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    Real uniform(double lo, double hi)
    {
        std::uniform_real_distribution<double> u(lo, hi);
        return Real(u(gen_));
    }
    Real log_uniform(double lo, double hi)
    {
        return exp(uniform(std::log(lo), std::log(hi)));
    }
    std::size_t integer(std::size_t lo, std::size_t hi)
    {
        std::uniform_int_distribution<std::size_t> u(lo, hi);
        return u(gen_);
    }
    Complex phase()
    {
        const Real theta = uniform(0, 2 * 3.14159265358979323846);
        return {cos(theta), sin(theta)};
    }
    double normal()
    {
        return std::normal_distribution<double>(0.0, 1.0)(gen_);
    }

    /// Distinct nodes in [lo, hi] with pairwise gap >= min_gap.
    std::vector<Real> nodes(std::size_t L, double lo, double hi, double min_gap)
    {
        for (;;)
        {
            std::vector<Real> z;
            for (std::size_t l = 0; l < L; ++l)
            {
                z.push_back(uniform(lo, hi));
            }
            bool ok = true;
            for (std::size_t a = 0; a < L && ok; ++a)
                for (std::size_t b = a + 1; b < L && ok; ++b)
                    ok = abs(z[a] - z[b]) >= min_gap;
            if (ok)
            {
                return z;
            }
        }
    }

    /// Complex amplitudes with modulus in [lo, hi].
    std::vector<Complex> amplitudes(std::size_t L, double lo, double hi)
    {
        std::vector<Complex> a;
        for (std::size_t l = 0; l < L; ++l)
        {
            a.push_back(Complex(uniform(lo, hi)) * phase());
        }
        return a;
    }

    PronyParameters parameters(std::size_t L, double min_gap = 1e-3)
    {
        PronyParameters p;
        p.step       = Real(1);
        p.nodes      = nodes(L, 0.05, 0.95, min_gap);
        p.amplitudes = amplitudes(L, 1e-3, 1.0);
        return p;
    }

    /// Haar-ish unitary from the QR factor of a complex Gaussian matrix.
    ComplexMatrix unitary(Eigen::Index n);

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

inline ComplexMatrix Rng::unitary(Eigen::Index n)
{
    ComplexMatrix g(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            g(r, c) = Complex(Real(normal()), Real(normal()));
    // modified Gram-Schmidt, twice for orthogonality at full precision
    ComplexMatrix q = g;
    for (int pass = 0; pass < 2; ++pass)
    {
        for (Eigen::Index c = 0; c < n; ++c)
        {
            for (Eigen::Index k = 0; k < c; ++k)
            {
                const Complex proj = q.col(k).dot(q.col(c));
                q.col(c) -= proj * q.col(k);
            }
            Real norm = 0;
            for (Eigen::Index r = 0; r < n; ++r)
                norm += magnitude(q(r, c)) * magnitude(q(r, c));
            q.col(c) /= Complex(sqrt(norm));
        }
    }
    return q;
}

} // namespace sprony::test

#endif // SPRONY_TESTS_SUPPORT_HPP
