#include "sprony/tagging.hpp"

#include <set>

#include "sprony/error.hpp"

namespace sprony
{

namespace
{

struct Nearest
{
    std::size_t index = 0;
    Real distance     = infinity();
};

Nearest nearest_in(const SectorSpec& s, const Real& x)
{
    Nearest best;
    for (std::size_t n = 0; n < s.size(); ++n)
    {
        const Real d = abs(s.eigenvalues[n] - x);
        if (d < best.distance)
        {
            best = {n, d};
        }
    }
    return best;
}

Real distance_to_others(const std::vector<SectorSpec>& sectors, SectorIndex own,
                        const Real& x)
{
    Real d = infinity();
    for (std::size_t s = 0; s < sectors.size(); ++s)
    {
        if (s != own)
        {
            d = min(d, nearest_in(sectors[s], x).distance);
        }
    }
    return d;
}

Real local_spacing(const SectorSpec& s, std::size_t n)
{
    Real d = infinity();
    if (n > 0)
    {
        d = min(d, s.eigenvalues[n] - s.eigenvalues[n - 1]);
    }
    if (n + 1 < s.size())
    {
        d = min(d, s.eigenvalues[n + 1] - s.eigenvalues[n]);
    }
    return is_finite(d) ? d : s.eigenvalues[n];
}

} // namespace

SeparationReport check_spectral_separation(const std::vector<SectorSpec>& sectors,
                                           const Tolerances& tol)
{
    SeparationReport report;
    for (std::size_t a = 0; a < sectors.size(); ++a)
    {
        for (std::size_t b = a + 1; b < sectors.size(); ++b)
        {
            for (std::size_t n = 0; n < sectors[a].size(); ++n)
            {
                for (std::size_t m = 0; m < sectors[b].size(); ++m)
                {
                    if (abs(sectors[a].eigenvalues[n] - sectors[b].eigenvalues[m]) <= tol.eig)
                    {
                        report.pass = false;
                        report.collisions.push_back(
                            {a, b, n, m, sectors[a].eigenvalues[n]});
                    }
                }
            }
        }
    }
    return report;
}

TaggedModel tag_rates(const ExponentialModel& model,
                      const std::vector<SectorSpec>& sectors,
                      const TagOptions& options)
{
    const Tolerances& tol = options.tol;
    if (sectors.empty())
    {
        throw Error(ErrorKind::InvalidArgument, "no sectors to tag against");
    }
    if (const auto sep = check_spectral_separation(sectors, tol); !sep.pass)
    {
        throw Error(ErrorKind::AmbiguousTag,
                    "spectral separation fails: sectors " +
                        std::to_string(sep.collisions.front().sector_a) + " and " +
                        std::to_string(sep.collisions.front().sector_b) +
                        " share rate " + format_real(sep.collisions.front().rate));
    }

    TaggedModel out;
    std::set<std::pair<SectorIndex, std::size_t>> claimed;
    for (const auto& term : sorted(model).terms)
    {
        const Real mu = term.rate;

        SectorIndex best_sector = 0;
        Nearest best;
        Real runner_up = infinity();
        for (std::size_t s = 0; s < sectors.size(); ++s)
        {
            const Nearest cand = nearest_in(sectors[s], mu);
            if (cand.distance < best.distance)
            {
                runner_up   = best.distance;
                best        = cand;
                best_sector = s;
            }
            else
            {
                runner_up = min(runner_up, cand.distance);
            }
        }
        if (abs(runner_up - best.distance) <= tol.eig)
        {
            throw Error(ErrorKind::AmbiguousTag,
                        "rate " + format_real(mu) +
                            " is equidistant from two sectors' spectra");
        }

        const Real alpha = sectors[best_sector].eigenvalues[best.index];
        const Real neighbourhood = distance_to_others(sectors, best_sector, alpha);
        if (!(best.distance < neighbourhood / 2))
        {
            throw Error(ErrorKind::AmbiguousTag,
                        "rate " + format_real(mu) +
                            " left the attribution neighbourhood of eigenvalue " +
                            format_real(alpha));
        }

        Real radius;
        if (options.capture_radius)
        {
            radius = *options.capture_radius;
        }
        else if (options.prior_gap)
        {
            radius = *options.prior_gap / 2;
        }
        else
        {
            radius = local_spacing(sectors[best_sector], best.index) / 10;
        }
        if (best.distance > radius)
        {
            throw Error(ErrorKind::UnmatchedRate,
                        "rate " + format_real(mu) + " has no active eigenvalue within " +
                            format_real(radius));
        }
        if (!claimed.insert({best_sector, best.index}).second)
        {
            throw Error(ErrorKind::AmbiguousTag,
                        "two rates claim eigenvalue " + format_real(alpha) +
                            " of sector " + std::to_string(best_sector));
        }
        out.terms.push_back({mu, alpha, term.amplitude, best_sector, best.index, alpha});
    }
    out.gap = out.terms.empty() ? infinity() : compute_gap(out, sectors);
    return out;
}

Real compute_gap(const TaggedModel& tagged, const std::vector<SectorSpec>& sectors)
{
    if (tagged.terms.empty())
    {
        throw Error(ErrorKind::InvalidArgument, "gap of an empty tagged model");
    }
    Real gap = infinity();
    for (const auto& t : tagged.terms)
    {
        gap = min(gap, distance_to_others(sectors, t.sector, t.rate_snapped));
    }
    return gap;
}

Real compute_gap(const ExponentialModel& tagged_model,
                 const std::vector<SectorSpec>& sectors)
{
    TaggedModel tm;
    for (const auto& t : tagged_model.terms)
    {
        if (!t.tag)
        {
            throw Error(ErrorKind::InvalidArgument,
                        "term at rate " + format_real(t.rate) + " carries no sector tag");
        }
        tm.terms.push_back({t.rate, t.tag->alpha, t.amplitude, t.tag->sector,
                            t.tag->index, t.tag->alpha});
    }
    return compute_gap(tm, sectors);
}

std::vector<EigencomponentEstimate> recover_eigencomponents(const TaggedModel& tagged,
                                                            const MixtureSpec& spec,
                                                            const Tolerances& tol)
{
    std::vector<EigencomponentEstimate> out;
    for (const auto& t : tagged.terms)
    {
        const Complex atom = channel_atom(spec, t.sector, t.index);
        const Real w       = sector_weight(spec, t.sector);
        const Complex T    = Complex(w) * atom;
        if (magnitude(T) <= tol.obs)
        {
            throw Error(ErrorKind::ObservabilityFailure,
                        "channel is blind to eigenvalue " + format_real(t.alpha) +
                            " of sector " + std::to_string(t.sector));
        }
        out.push_back({t.sector, t.index, t.alpha, t.amplitude / T, T});
    }
    return out;
}

} // namespace sprony
