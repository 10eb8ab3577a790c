#include "sprony/prony.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "sprony/error.hpp"

namespace sprony
{

namespace
{

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

const Real kIllConditioned = Real(1e12);

template <typename F>
auto in_stage(const char* stage, F&& f) -> decltype(f())
{
    try
    {
        return f();
    }
    catch (const Error& e)
    {
        if (!e.stage().empty())
        {
            throw;
        }
        throw e.with_stage(stage);
    }
}

void require_samples(std::size_t available, std::size_t L)
{
    if (L < 1)
    {
        throw Error(ErrorKind::InvalidArgument, "model order L must be >= 1");
    }
    if (available < 2 * L)
    {
        throw Error(ErrorKind::InsufficientSamples,
                    "need " + std::to_string(2 * L) + " samples for L = " +
                        std::to_string(L) + ", got " + std::to_string(available));
    }
}

} // namespace

PronyParameters PronyParameters::from_model(const ExponentialModel& model,
                                            const Real& h)
{
    PronyParameters p;
    p.step = h;
    for (const auto& t : model.terms)
    {
        p.nodes.push_back(exp(-t.rate * h));
        p.amplitudes.push_back(t.amplitude);
    }
    return p;
}

ExponentialModel PronyParameters::to_model() const
{
    ExponentialModel m;
    for (std::size_t l = 0; l < nodes.size(); ++l)
    {
        m.terms.push_back({-log(nodes[l]) / step, amplitudes[l], std::nullopt});
    }
    return m;
}

std::vector<std::string> validate_parameters(const PronyParameters& params,
                                             const Tolerances& tol)
{
    std::vector<std::string> issues;
    if (params.nodes.size() != params.amplitudes.size())
    {
        issues.push_back("nodes and amplitudes differ in length");
        return issues;
    }
    if (params.nodes.empty())
    {
        issues.push_back("no nodes");
    }
    for (std::size_t l = 0; l < params.nodes.size(); ++l)
    {
        if (!(params.nodes[l] > 0 && params.nodes[l] < 1))
        {
            issues.push_back("node " + std::to_string(l) + " outside (0, 1)");
        }
        if (magnitude(params.amplitudes[l]) <= tol.amp)
        {
            issues.push_back("amplitude " + std::to_string(l) + " is zero");
        }
        for (std::size_t k = 0; k < l; ++k)
        {
            if (params.nodes[k] == params.nodes[l])
            {
                issues.push_back("nodes " + std::to_string(k) + " and " +
                                 std::to_string(l) + " coincide");
            }
        }
    }
    return issues;
}

std::vector<Complex> prony_samples(const PronyParameters& params, std::size_t count)
{
    std::vector<Complex> y(count, Complex(0));
    for (std::size_t l = 0; l < params.size(); ++l)
    {
        Real power = 1;
        for (std::size_t n = 0; n < count; ++n)
        {
            y[n] += params.amplitudes[l] * Complex(power);
            power *= params.nodes[l];
        }
    }
    return y;
}

Complex PronyPolynomial::operator()(const Complex& z) const
{
    Complex acc(1);
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
    {
        acc = acc * z + *it;
    }
    return acc;
}

Complex PronyPolynomial::derivative(const Complex& z) const
{
    // Horner on p and p' together.
    Complex p(1), dp(0);
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
    {
        dp = dp * z + p;
        p  = p * z + *it;
    }
    return dp;
}

ComplexMatrix build_hankel(const std::vector<Complex>& values, std::size_t L)
{
    require_samples(values.size(), L);
    ComplexMatrix H(idx(L), idx(L));
    for (std::size_t r = 0; r < L; ++r)
    {
        for (std::size_t s = 0; s < L; ++s)
        {
            H(idx(r), idx(s)) = values[r + s];
        }
    }
    return H;
}

PronyPolynomial prony_polynomial(const std::vector<Complex>& values, std::size_t L,
                                 const Tolerances& tol)
{
    const ComplexMatrix H  = build_hankel(values, L);
    const RealVector sigma = singular_values(H);
    const Real smax        = sigma(0);
    const Real smin        = sigma(sigma.size() - 1);
    if (smax == 0 || smin <= tol.rank * smax)
    {
        throw Error(ErrorKind::RankDeficientHankel,
                    "Hankel matrix is numerically singular (sigma_min/sigma_max = " +
                        format_real(smax == 0 ? Real(0) : smin / smax) +
                        "); nodes coincide or an amplitude vanishes");
    }
    ComplexVector rhs(idx(L));
    for (std::size_t r = 0; r < L; ++r)
    {
        rhs(idx(r)) = -values[L + r];
    }
    const ComplexVector c = H.completeOrthogonalDecomposition().solve(rhs);
    PronyPolynomial p;
    p.coefficients.assign(c.data(), c.data() + c.size());
    return p;
}

std::vector<Complex> solve_nodes(const PronyPolynomial& poly)
{
    const std::size_t L = poly.degree();
    if (L == 0)
    {
        return {};
    }
    ComplexMatrix companion = ComplexMatrix::Zero(idx(L), idx(L));
    for (std::size_t k = 0; k < L; ++k)
    {
        companion(idx(k), idx(L - 1)) = -poly.coefficients[k];
        if (k + 1 < L)
        {
            companion(idx(k + 1), idx(k)) = Complex(1);
        }
    }
    Eigen::ComplexEigenSolver<ComplexMatrix> es(companion, false);
    std::vector<Complex> roots(es.eigenvalues().data(),
                               es.eigenvalues().data() + L);
    for (auto& z : roots)
    {
        for (int step = 0; step < 3; ++step)
        {
            const Complex d = poly.derivative(z);
            if (d == Complex(0))
            {
                break;
            }
            z -= poly(z) / d;
        }
    }
    return roots;
}

std::vector<Real> nodes_to_rates(const std::vector<Complex>& nodes, const Real& h,
                                 const Tolerances& tol)
{
    if (!(h > 0))
    {
        throw Error(ErrorKind::InvalidArgument, "sampling step must be > 0");
    }
    Real scale = 0;
    for (const auto& z : nodes)
    {
        scale = max(scale, magnitude(z));
    }
    std::vector<Real> rates;
    rates.reserve(nodes.size());
    for (const auto& z : nodes)
    {
        if (abs(z.imag()) > tol.imag * scale)
        {
            throw Error(ErrorKind::NodeOutOfRange,
                        "node " + format_real(z.real()) + " + " + format_real(z.imag()) +
                            "i is not real");
        }
        if (!(z.real() > 0) || !(z.real() < 1 - tol.near_unit))
        {
            throw Error(ErrorKind::NodeOutOfRange,
                        "node " + format_real(z.real()) + " outside (0, 1)");
        }
        rates.push_back(-log(z.real()) / h);
    }
    return rates;
}

AmplitudeFit solve_amplitudes(const std::vector<Complex>& nodes,
                              const std::vector<Complex>& values)
{
    const std::size_t L = nodes.size();
    if (L == 0)
    {
        return {{}, Real(1), false};
    }
    if (values.size() < L)
    {
        throw Error(ErrorKind::InsufficientSamples,
                    "need at least as many samples as nodes");
    }
    for (std::size_t l = 0; l < L; ++l)
    {
        for (std::size_t k = 0; k < l; ++k)
        {
            if (nodes[k] == nodes[l])
            {
                throw Error(ErrorKind::InvalidArgument, "nodes must be distinct");
            }
        }
    }
    const std::size_t K = values.size();
    ComplexMatrix V(idx(K), idx(L));
    ComplexVector y(idx(K));
    for (std::size_t l = 0; l < L; ++l)
    {
        Complex power(1);
        for (std::size_t n = 0; n < K; ++n)
        {
            V(idx(n), idx(l)) = power;
            power *= nodes[l];
        }
    }
    for (std::size_t n = 0; n < K; ++n)
    {
        y(idx(n)) = values[n];
    }
    const RealVector sigma = singular_values(V);
    const Real smin        = sigma(sigma.size() - 1);
    const Real cond        = smin > 0 ? sigma(0) / smin : infinity();
    const ComplexVector a  = V.colPivHouseholderQr().solve(y);
    AmplitudeFit fit;
    fit.amplitudes.assign(a.data(), a.data() + a.size());
    fit.condition       = cond;
    fit.ill_conditioned = !(cond <= kIllConditioned);
    return fit;
}

Reconstruction reconstruct_detailed(const SampleWindow& window, std::size_t L,
                                    const Tolerances& tol)
{
    if (auto issues = validate_window(window); !issues.empty())
    {
        throw Error(ErrorKind::InvalidArgument, issues.front(), "input");
    }
    in_stage("input", [&] { require_samples(window.size(), L); return 0; });

    const PronyPolynomial poly =
        in_stage("polynomial", [&] { return prony_polynomial(window.values, L, tol); });
    const std::vector<Complex> roots = in_stage("roots", [&] { return solve_nodes(poly); });
    const std::vector<Real> rates =
        in_stage("rates", [&] { return nodes_to_rates(roots, window.step, tol); });

    std::vector<Complex> real_nodes;
    real_nodes.reserve(roots.size());
    for (const auto& z : roots)
    {
        real_nodes.emplace_back(z.real());
    }
    const AmplitudeFit fit =
        in_stage("amplitudes", [&] { return solve_amplitudes(real_nodes, window.values); });

    std::vector<std::size_t> order(L);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return rates[a] < rates[b]; });

    Reconstruction out;
    out.polynomial            = poly;
    out.vandermonde_condition = fit.condition;
    out.ill_conditioned       = fit.ill_conditioned;
    for (auto l : order)
    {
        out.model.terms.push_back({rates[l], fit.amplitudes[l], std::nullopt});
        out.nodes.push_back(real_nodes[l].real());
    }
    return out;
}

ExponentialModel reconstruct(const SampleWindow& window, std::size_t L,
                             const Tolerances& tol)
{
    return reconstruct_detailed(window, L, tol).model;
}

ExponentialModel reconstruct_from_moments(const std::vector<Complex>& moments,
                                          std::size_t L, const Tolerances& tol)
{
    in_stage("input", [&] { require_samples(moments.size(), L); return 0; });

    Real scale = 1;
    const Real m0   = magnitude(moments[0]);
    const Real mtop = magnitude(moments[2 * L - 1]);
    if (m0 > 0 && mtop > 0)
    {
        const Real s = pow(mtop / m0, Real(1) / Real(2 * L - 1));
        if (is_finite(s) && s > 0)
        {
            scale = s;
        }
    }
    std::vector<Complex> scaled(moments.begin(), moments.begin() + 2 * L);
    Real factor = 1;
    for (auto& m : scaled)
    {
        m /= Complex(factor);
        factor *= scale;
    }

    const PronyPolynomial poly =
        in_stage("polynomial", [&] { return prony_polynomial(scaled, L, tol); });
    const std::vector<Complex> roots = in_stage("roots", [&] { return solve_nodes(poly); });

    Real top = 0;
    for (const auto& r : roots)
    {
        top = max(top, magnitude(r));
    }
    std::vector<Complex> real_roots;
    for (const auto& r : roots)
    {
        if (abs(r.imag()) > tol.imag * top || !(r.real() > 0))
        {
            throw Error(ErrorKind::NodeOutOfRange,
                        "recovered rate " + format_real(r.real() * scale) +
                            " is not real and positive",
                        "rates");
        }
        real_roots.emplace_back(r.real());
    }
    const AmplitudeFit fit =
        in_stage("amplitudes", [&] { return solve_amplitudes(real_roots, scaled); });

    ExponentialModel out;
    for (std::size_t l = 0; l < L; ++l)
    {
        out.terms.push_back({real_roots[l].real() * scale, fit.amplitudes[l], std::nullopt});
    }
    return sorted(out);
}

std::size_t estimate_order(const SampleWindow& window, std::size_t L_max,
                           const Tolerances& tol)
{
    const ComplexMatrix H  = build_hankel(window.values, L_max);
    const RealVector sigma = singular_values(H);
    if (sigma.size() == 0 || sigma(0) == 0)
    {
        return 0;
    }
    std::size_t rank = 0;
    for (Eigen::Index k = 0; k < sigma.size(); ++k)
    {
        if (sigma(k) > tol.rank * sigma(0))
        {
            ++rank;
        }
    }
    return rank;
}

} // namespace sprony
