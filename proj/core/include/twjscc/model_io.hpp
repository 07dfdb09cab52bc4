#pragma once

#include <string>

#include "twjscc/hybrid.hpp"
#include "twjscc/prob.hpp"
#include "twjscc/rd.hpp"
#include "twjscc/region.hpp"

namespace twjscc {

// A complete problem instance: correlated source pair, two-way channel, and
// the two distortion measures.
struct Model {
  JointSourcePMF source;
  TwoWayChannel channel;
  DistortionMatrix distortion1;
  DistortionMatrix distortion2;
};

// JSON schema: {"source": [[..]] (s1-major), "channel": [[[[..]]]] indexed
// [x1][x2][y1][y2], "distortion1": [[..]] (s1 x s1_hat), "distortion2":
// [[..]]}.  All component invariants are enforced; errors carry the field
// name.  Parse failures throw std::runtime_error.
Model parse_model(const std::string& json_text);
Model load_model(const std::string& path);
std::string model_to_json(const Model& m);

// Scheme schema: {"U1": k, "U2": k, "PU1_S1": [[..]] (s-major rows, null for
// an undefined row), "PU2_S2": [[..]], "f1": [[..]] indexed [u][s], "f2",
// "g1": [[[[..]]]] indexed [u2][u1][s1][y1], "g2": [[[[..]]]] indexed
// [u1][u2][s2][y2]}.
HybridScheme parse_scheme(const std::string& json_text);
HybridScheme load_scheme(const std::string& path);
std::string scheme_to_json(const HybridScheme& sch);

// Fixed shortest round-trip formatting (printf %.17g): equal doubles always
// serialize to identical bytes, so repeated runs diff clean.
std::string format_double(double v);

// `D,R,slope` rows after a header line.
std::string curve_to_csv(const RDCurve& curve);
// `kind,x,y` rows: every sampled point as kind=point, then the closed hull
// vertices in order as kind=hull.
std::string region_to_csv(const RegionBoundary& region);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace twjscc
