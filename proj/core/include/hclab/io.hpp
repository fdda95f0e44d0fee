#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hclab/functionals.hpp"
#include "hclab/loggrid.hpp"
#include "hclab/solver.hpp"
#include "hclab/verify.hpp"

namespace hclab {

inline constexpr int schema_version = 1;

// `r,value` rows with 17 significant digits.
std::string field_csv(const RadialField& u);
// Reads field_csv output. The nodes must be uniform in ln r to 1e-9 relative;
// the grid is rebuilt (symmetric when the end points mirror each other).
// Error(input) on malformed rows.
RadialField parse_field_csv(const std::string& text, int N);

// `iter,rayleigh,residual` rows.
std::string trace_csv(std::span<const TraceRow> trace);
// `r,ratio` rows of u/m for the model profile m.
std::string ratio_csv(const ProblemParams& params, const RadialField& u);

// JSON documents, each carrying schema_version.
std::string params_json(const ProblemParams& params);
std::string energy_json(const EnergyReport& report);
EnergyReport parse_energy_json(const std::string& text);
std::string solve_json(const ProblemParams& params, const SolveResult& result);
std::string solve_sequence_json(const ProblemParams& target, std::span<const SolveResult> legs);
std::string decay_fit_json(const ProblemParams& params, const DecayFit& fit);
std::string bound_json(const BoundCertificate& cert);
std::string checks_json(std::span<const CheckRecord> records, const std::string& suite);

// Creates missing parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace hclab
