// File formats: matrix JSON, signal/distribution CSV, classification and
// report JSON. Writers are atomic (temp file + rename) and print doubles with
// 17 significant digits so identical runs produce identical bytes.
#pragma once

#include <string>

#include <json.hpp>

#include "metawig/distributions.hpp"
#include "metawig/symplectic.hpp"

namespace metawig {

void write_text_atomic(const std::string& path, const std::string& content);

std::string format_double(double v);

// {"half_dim": m, "rows": [[...2m reals...] x 2m]}
nlohmann::json matrix_to_json(const SymplecticMatrix& A);
SymplecticMatrix matrix_from_json(const nlohmann::json& j, bool check = true);
SymplecticMatrix read_matrix(const std::string& path, bool check = true);
void write_matrix(const std::string& path, const SymplecticMatrix& A);

// CSV header "index,re,im" (one axis) or "i0,i1,...,re,im"; rows lexicographic.
std::string signal_to_csv(const Signal& f);
Signal signal_from_csv(const std::string& text);
Signal read_signal(const std::string& path);
void write_signal(const std::string& path, const Signal& f);

// CSV header "ix,ixi,re,im" for d = 1 (generalized per-axis labels otherwise),
// plus a JSON sidecar with grid metadata, the matrix, and path provenance.
std::string distribution_to_csv(const Distribution& W);
nlohmann::json distribution_sidecar(const Distribution& W);
void write_distribution(const std::string& path, const Distribution& W);

nlohmann::json classification_to_json(const Classification& c);

} // namespace metawig
