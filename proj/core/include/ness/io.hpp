#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ness/macro.hpp"
#include "ness/moments.hpp"
#include "ness/profile.hpp"
#include "ness/sim.hpp"
#include "ness/verify.hpp"

namespace ness {

/// Library version and the `git describe` of the build tree ("unknown" when
/// built outside a checkout).
std::string version_string();
std::string build_describe();

/// Column names of each CSV schema, in output order.
const std::vector<std::string>& profile_columns();
const std::vector<std::string>& estimate_columns();
const std::vector<std::string>& macro_columns();

/// CSV files use '.' as decimal separator regardless of the global locale,
/// 17 significant digits and "nan" for undefined entries.
void write_profile_csv(std::ostream& os, const ProfileTable& table);
void write_estimate_csv(std::ostream& os, const EstimateTable& table);
/// One block of rows per slice.
void write_macro_csv(std::ostream& os, const std::vector<MacroFields>& slices);

/// JSON documents, pretty-printed.
std::string params_json(const ChainParams& params);
std::string moments_summary_json(const MomentSolution& sol, const ProfileTable& table);
std::string simulation_manifest_json(const ChainParams& params, const SimConfig& cfg,
                                     const EstimateTable& table);
std::string macro_summary_json(const ChainParams& params, const std::vector<MacroFields>& slices,
                               double dt);
std::string report_json(const VerificationReport& report);

/// Writes `content` to `path`, creating parent directories.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace ness
