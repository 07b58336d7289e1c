#pragma once

#include "kyt/certificate.hpp"
#include "kyt/commuting.hpp"
#include "kyt/decompose.hpp"
#include "kyt/rank_detect.hpp"
#include "kyt/sweep.hpp"
#include "kyt/tensor.hpp"

#include <string>
#include <vector>

namespace kyt {

// On-disk formats (see docs/FORMATS.md):
//   tensor: {"dims":[n1,n2,n3], "data":[... row-major ...]}
//   cp:     {"r":r, "dims":[n1,n2,n3], "A":[n1 rows of r], "B":..., "C":...}
//   matrix lists (commuting extensions): {"m":m, "n"/"r":d, "matrices":[...]}
// Malformed files raise InvalidInput naming the offending JSON path.

Tensor3 load_tensor(const std::string& path);
void save_tensor(const std::string& path, const Tensor3& t);

CpDecomposition load_cp(const std::string& path);
void save_cp(const std::string& path, const CpDecomposition& d);

std::vector<MatrixXd> load_matrix_list(const std::string& path);
void save_matrix_list(const std::string& path, const std::vector<MatrixXd>& matrices,
                      const std::string& dim_key);

std::string to_json_string(const RankReport& report);
std::string to_json_string(const UniquenessCertificate& cert);
std::string to_json_string(const ExtensionReport& report);
std::string to_json_string(const DecomposeReport& report);

void save_text(const std::string& path, const std::string& content);

/// Debug dump of a flattening: the matrix as {"rows","cols","data"} plus a
/// sidecar file mapping row/column indices to (subset, coordinate) labels.
void save_flattening_dump(const std::string& matrix_path, const std::string& maps_path,
                          const FlatteningMatrix& flat);

std::string sweep_csv(const SweepResult& result);
std::string sweep_summary_text(const SweepResult& result);

} // namespace kyt
