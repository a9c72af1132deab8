#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "json.hpp"

#include "inradius/certify.hpp"
#include "inradius/coverlat.hpp"
#include "inradius/geometry.hpp"
#include "inradius/harness.hpp"

namespace inradius {

// CSV columns are fixed; the first line carries the format version.
inline constexpr const char* kCsvVersion = "# inradius-lab v1";
inline constexpr const char* kCsvHeader =
    "re_lambda,im_lambda,r_lambda,mass_ratio,certified,measured,constructive,Q,boundary_fraction,h,status";

void write_csv(std::ostream& out, const std::vector<SweepRecord>& records);

nlohmann::json to_json(const SweepRecord& rec);
nlohmann::json to_json(const ProofRun& run);
nlohmann::json to_json(const SigmaEstimate& est);
nlohmann::json to_json(const GoodBall& gb);
nlohmann::json to_json(const CoverResult& cover);
nlohmann::json to_json(const LatticeCount& lc);
nlohmann::json to_json(const LipschitzEstimate& est);

/// Binary P6 image of |psi| over a 2-d grid: gray = round(255 |psi| / max), first row is the top
/// (largest x_2). Pixels whose center lies within h/2 of the circle |p - c| = R are painted red.
void write_ppm(std::ostream& out, const Grid& grid, const std::vector<double>& modulus,
               const std::optional<InradiusCertificate>& circle = std::nullopt);

}  // namespace inradius
