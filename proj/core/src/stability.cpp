#include "sprony/stability.hpp"

#include <algorithm>

#include "sprony/error.hpp"

namespace sprony
{

namespace
{
Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }
} // namespace

Real StabilityConfig::resolve_C3(const PronyParameters& params) const
{
    if (C3)
    {
        return *C3;
    }
    Real z_min = 1;
    for (const auto& z : params.nodes)
    {
        z_min = min(z_min, z);
    }
    return C2 * 2 / (params.step * z_min);
}

ComplexMatrix prony_jacobian(const PronyParameters& params, const Tolerances& tol)
{
    if (auto issues = validate_parameters(params, tol); !issues.empty())
    {
        throw Error(ErrorKind::DegenerateParameters, issues.front());
    }
    const std::size_t L = params.size();
    ComplexMatrix J(idx(2 * L), idx(2 * L));
    for (std::size_t l = 0; l < L; ++l)
    {
        const Real& z    = params.nodes[l];
        const Complex& a = params.amplitudes[l];
        Real power_prev  = 0; // z^{n-1}
        Real power       = 1; // z^n
        for (std::size_t n = 0; n < 2 * L; ++n)
        {
            J(idx(n), idx(l))     = a * Complex(Real(n) * power_prev);
            J(idx(n), idx(L + l)) = Complex(power);
            power_prev            = power;
            power *= z;
        }
    }
    return J;
}

Real kappa_exp(const ComplexMatrix& jacobian, const Tolerances& tol)
{
    if (jacobian.rows() == 0 || jacobian.rows() != jacobian.cols())
    {
        throw Error(ErrorKind::InvalidArgument, "Jacobian must be square and nonempty");
    }
    const RealVector sigma = singular_values(jacobian);
    const Real smin        = sigma(sigma.size() - 1);
    if (smin == 0 || smin <= tol.rank * sigma(0))
    {
        throw Error(ErrorKind::SingularJacobian,
                    "Prony Jacobian is singular: nodes collide or an amplitude vanishes");
    }
    return 1 / smin;
}

KappaBound kappa_upper_bound(const ExponentialModel& model, const Real& h,
                             const Real& C_L)
{
    if (!(h > 0) || !(C_L > 0))
    {
        throw Error(ErrorKind::InvalidArgument, "h and C_L must be > 0");
    }
    if (auto issues = validate_model(model); !issues.empty() || model.terms.empty())
    {
        throw Error(ErrorKind::InvalidArgument,
                    issues.empty() ? std::string("empty model") : issues.front());
    }
    const std::size_t L = model.size();
    const Real pairs    = Real(L * (L - 1) / 2);
    Real mu_max = 0, a_min = infinity(), product = 1;
    KappaBound out;
    for (std::size_t l = 0; l < L; ++l)
    {
        const auto& t = model.terms[l];
        mu_max        = max(mu_max, t.rate);
        a_min         = min(a_min, magnitude(t.amplitude));
        for (std::size_t k = l + 1; k < L; ++k)
        {
            const auto& u = model.terms[k];
            const Real d  = abs(t.rate - u.rate);
            product *= d;
            if (t.tag && u.tag)
            {
                (t.tag->sector == u.tag->sector ? out.intra_factors : out.inter_factors)
                    .push_back(d);
            }
            else
            {
                out.untagged_factors.push_back(d);
            }
        }
    }
    out.value = C_L * exp(mu_max * h * pairs) / (pow(h, pairs) * product * a_min);
    return out;
}

Real epsilon_threshold(const Real& gap, const Real& kappa, const Real& C3)
{
    if (!(kappa > 0) || !(C3 > 0) || !is_finite(kappa) || !is_finite(C3) || gap < 0)
    {
        throw Error(ErrorKind::InvalidArgument,
                    "epsilon threshold needs positive finite kappa and C3");
    }
    if (!is_finite(gap))
    {
        return infinity();
    }
    return gap / (2 * C3 * kappa);
}

std::map<std::pair<SectorIndex, std::size_t>, Real>
observability_norms(const MixtureSpec& spec, const TaggedModel& tagged,
                    const Tolerances& tol)
{
    std::map<std::pair<SectorIndex, std::size_t>, Real> out;
    for (const auto& t : tagged.terms)
    {
        const Real w      = sector_weight(spec, t.sector);
        const Real scalar = w * magnitude(channel_atom(spec, t.sector, t.index));
        if (scalar <= tol.obs)
        {
            throw Error(ErrorKind::ObservabilityFailure,
                        "channel is blind to eigenvalue " + format_real(t.alpha) +
                            " of sector " + std::to_string(t.sector));
        }
        out[{t.sector, t.index}] = 1 / scalar;
    }
    return out;
}

Real intra_sector_gap(const SectorSpec& sector)
{
    Real d = infinity();
    for (std::size_t n = 1; n < sector.size(); ++n)
    {
        d = min(d, abs(sector.eigenvalues[n] - sector.eigenvalues[n - 1]));
    }
    return d;
}

namespace
{
TaggedModel truth_as_tagged(const ExponentialModel& truth)
{
    TaggedModel tm;
    for (const auto& t : truth.terms)
    {
        tm.terms.push_back({t.rate, t.tag->alpha, t.amplitude, t.tag->sector,
                            t.tag->index, t.tag->alpha});
    }
    return tm;
}

bool fully_tagged(const ExponentialModel& m)
{
    return std::all_of(m.terms.begin(), m.terms.end(),
                       [](const ExponentialTerm& t) { return t.tag.has_value(); });
}
} // namespace

StabilityReport stability_report(const MixtureSpec& spec, const Real& h,
                                 const StabilityConfig& config, const Tolerances& tol)
{
    const ExponentialModel truth = collapse(spec, tol);
    if (truth.terms.empty())
    {
        throw Error(ErrorKind::InvalidArgument, "the mixture observable is identically zero");
    }
    const PronyParameters params = PronyParameters::from_model(truth, h);

    StabilityReport r;
    r.kappa_exp         = kappa_exp(prony_jacobian(params, tol), tol);
    r.C_L               = config.C_L;
    r.kappa_upper_bound = kappa_upper_bound(truth, h, config.C_L).value;
    r.C3                = config.resolve_C3(params);
    r.mu_max            = 0;
    for (const auto& t : truth.terms)
    {
        r.mu_max = max(r.mu_max, t.rate);
    }
    for (const auto& s : spec.network.sectors)
    {
        r.intra_gaps[s.id] = intra_sector_gap(s);
    }
    if (fully_tagged(truth))
    {
        const TaggedModel tagged = truth_as_tagged(truth);
        r.gap                    = compute_gap(tagged, spec.network.sectors);
        r.observability_inverses = observability_norms(spec, tagged, tol);
    }
    else
    {
        // Merged multi-sector terms have no attribution; no gap protects them.
        r.gap = 0;
    }
    r.epsilon0 = epsilon_threshold(r.gap, r.kappa_exp, r.C3);
    return r;
}

Real SweepRecord::median_error() const
{
    if (errors.empty())
    {
        return infinity();
    }
    std::vector<Real> e = errors;
    const std::size_t mid = e.size() / 2;
    std::nth_element(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(mid), e.end());
    if (e.size() % 2 == 1)
    {
        return e[mid];
    }
    const Real upper = e[mid];
    const Real lower = *std::max_element(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(mid));
    return (lower + upper) / 2;
}

std::vector<SweepRecord> noise_sweep(const MixtureSpec& spec, const Real& h,
                                     std::size_t L, const std::vector<Real>& epsilons,
                                     std::size_t trials, std::uint64_t seed,
                                     const Tolerances& tol)
{
    if (trials < 1)
    {
        throw Error(ErrorKind::InvalidArgument, "need at least one trial");
    }
    const ExponentialModel truth = collapse(spec, tol);
    if (truth.size() != L)
    {
        throw Error(ErrorKind::InvalidArgument,
                    "model order L = " + std::to_string(L) + " but the observable has " +
                        std::to_string(truth.size()) + " terms");
    }
    const SampleWindow clean = sample_uniform(truth, h, 2 * L);

    const auto& sectors = spec.network.sectors;
    const bool tagging  = fully_tagged(truth) && check_spectral_separation(sectors, tol).pass;
    TagOptions tag_options;
    tag_options.tol = tol;
    std::vector<Complex> true_components;
    if (tagging)
    {
        const TaggedModel tagged = truth_as_tagged(truth);
        tag_options.prior_gap    = compute_gap(tagged, sectors);
        for (const auto& c : recover_eigencomponents(tagged, spec, tol))
        {
            true_components.push_back(c.coefficient);
        }
    }

    std::vector<SweepRecord> out;
    out.reserve(epsilons.size());
    for (const Real& eps : epsilons)
    {
        SweepRecord rec;
        rec.epsilon = eps;
        rec.trials  = trials;
        for (std::size_t trial = 0; trial < trials; ++trial)
        {
            const SampleWindow noisy = add_noise(clean, eps, seed + trial);
            ExponentialModel estimate;
            bool recon_ok = true;
            try
            {
                estimate = reconstruct(noisy, L, tol);
            }
            catch (const Error&)
            {
                recon_ok = false;
            }
            Real err    = infinity();
            bool tag_ok = false;
            if (recon_ok)
            {
                err = 0;
                for (std::size_t l = 0; l < L; ++l)
                {
                    err = max(err, abs(estimate.terms[l].rate - truth.terms[l].rate));
                    err = max(err, magnitude(estimate.terms[l].amplitude -
                                             truth.terms[l].amplitude));
                }
                tag_ok = true;
                if (tagging)
                {
                    try
                    {
                        const TaggedModel tagged = tag_rates(estimate, sectors, tag_options);
                        for (std::size_t l = 0; l < L && tag_ok; ++l)
                        {
                            tag_ok = tagged.terms[l].sector == truth.terms[l].tag->sector &&
                                     tagged.terms[l].index == truth.terms[l].tag->index;
                        }
                        if (tag_ok)
                        {
                            const auto comps = recover_eigencomponents(tagged, spec, tol);
                            for (std::size_t l = 0; l < L; ++l)
                            {
                                err = max(err, magnitude(comps[l].coefficient -
                                                         true_components[l]));
                            }
                        }
                    }
                    catch (const Error&)
                    {
                        tag_ok = false;
                    }
                    if (!tag_ok)
                    {
                        err = infinity();
                    }
                }
            }
            rec.errors.push_back(err);
            rec.recon_ok.push_back(recon_ok);
            rec.tag_ok.push_back(tag_ok);
            rec.recon_failures += recon_ok ? 0 : 1;
            rec.tag_failures += (recon_ok && !tag_ok) ? 1 : 0;
        }
        out.push_back(std::move(rec));
    }
    return out;
}

Real loglog_slope(const std::vector<SweepRecord>& records)
{
    std::vector<Real> xs, ys;
    for (const auto& r : records)
    {
        const Real m = r.median_error();
        if (r.epsilon > 0 && is_finite(m) && m > 0)
        {
            xs.push_back(log(r.epsilon));
            ys.push_back(log(m));
        }
    }
    if (xs.size() < 2)
    {
        throw Error(ErrorKind::InvalidArgument, "slope needs two usable noise levels");
    }
    const Real n = Real(xs.size());
    Real sx = 0, sy = 0;
    for (std::size_t k = 0; k < xs.size(); ++k)
    {
        sx += xs[k];
        sy += ys[k];
    }
    const Real mx = sx / n, my = sy / n;
    Real sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < xs.size(); ++k)
    {
        sxy += (xs[k] - mx) * (ys[k] - my);
        sxx += (xs[k] - mx) * (xs[k] - mx);
    }
    return sxy / sxx;
}

Real empirical_locality(const std::vector<SweepRecord>& records)
{
    Real best = 0;
    for (const auto& r : records)
    {
        if (r.recon_failures == 0)
        {
            best = max(best, r.epsilon);
        }
    }
    return best;
}

} // namespace sprony
