#ifndef SPRONY_IO_HPP
#define SPRONY_IO_HPP

//
// File formats. JSON reals are written as numbers when the shortest double
// literal reproduces the value exactly and as decimal strings otherwise;
// readers accept both and parse number literals from their source text, so
// "0.3" means the binary128 value nearest 0.3. Complex values are written as
// [re, im]; a bare real is accepted on input. Infinite values are the
// string "inf".
//

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sprony/mixture.hpp"
#include "sprony/network.hpp"
#include "sprony/stability.hpp"
#include "sprony/tagging.hpp"
#include "sprony/types.hpp"

namespace sprony::io
{

// NetworkConfig: sectors, optional transfers (canonical cocycle when
// absent), states, observation and optional reference sector.
std::string mixture_to_json(const MixtureSpec& spec);
MixtureSpec mixture_from_json(const std::string& text, const Tolerances& tol = {});

std::string sector_to_json(const SectorSpec& sector);
SectorSpec sector_from_json(const std::string& text);
std::string state_to_json(const SectorState& state);
SectorState state_from_json(const std::string& text);
std::string transfer_to_json(const TransferMap& map);
TransferMap transfer_from_json(const std::string& text);
std::string observation_to_json(const ObservationFunctional& obs);
ObservationFunctional observation_from_json(const std::string& text);

// {"terms": [{"rate", "amp_re", "amp_im", "sector"?, "index"?, "alpha"?}]}
std::string model_to_json(const ExponentialModel& model);
ExponentialModel model_from_json(const std::string& text);

// {"terms": [{"rate_raw", "rate_snapped", "amp", "sector", "index", "alpha"}], "gap"}
std::string tagged_to_json(const TaggedModel& model);
TaggedModel tagged_from_json(const std::string& text);

// CSV `n,t,y_re,y_im` plus sidecar {"h", "noise_level", "seed"}.
std::string window_to_csv(const SampleWindow& window);
std::string window_sidecar_json(const SampleWindow& window);
SampleWindow window_from_csv(const std::string& csv, const std::string& sidecar);

std::string stability_to_json(const StabilityReport& report);
StabilityReport stability_from_json(const std::string& text);

std::string components_to_json(const std::vector<EigencomponentEstimate>& components);

struct NetworkVerification
{
    std::vector<Real> gauges;
    IsospectralReport isospectral;
    CocycleVerification cocycle;
    IntertwiningVerification intertwining;
    IntertwiningVerification generator;
    Real inverse_residual;
    bool pass = false;
};
std::string verification_to_json(const NetworkVerification& v);

// `epsilon,trial,param_error,tag_ok,recon_ok`, one row per trial.
std::string sweep_to_csv(const std::vector<SweepRecord>& records);

// Sidecar path of a window CSV: same stem, .json extension.
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

} // namespace sprony::io

#endif // SPRONY_IO_HPP
