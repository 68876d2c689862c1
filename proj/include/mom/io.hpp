#pragma once

#include <string>

#include <boost/property_tree/ptree.hpp>

#include "mom/common.hpp"
#include "mom/datagen.hpp"
#include "mom/estimators.hpp"
#include "mom/set_geometry.hpp"

namespace mom::io {

using Config = boost::property_tree::ptree;

// Comma-separated rows, '#' starts a comment line. Written with 17
// significant digits so values round-trip exactly.
Matrix read_dataset(const std::string& path);
void write_dataset(const std::string& path, const Matrix& data);

// Contamination sidecar, kept apart from the data so estimator runs stay blind.
void write_sidecar(const std::string& path, const ContaminatedDataset& ds, const std::string& strategy);
std::vector<int> read_sidecar_outliers(const std::string& path);
inline std::string sidecar_path(const std::string& data_path) { return data_path + ".meta"; }

Config read_config(const std::string& path);
Config parse_config(const std::string& text);
std::string format_config(const Config& cfg);

// "1 2 3", "1,2,3"; rows separated by ';'
Vector parse_vector(const std::string& text);
Matrix parse_matrix(const std::string& text);
std::string format_vector(const Vector& v);

/// [set] block: kind = cross | ball | points, dimension, radius, points.
SymmetricSet set_from_config(const Config& section);
Config set_to_config(const SymmetricSet& s);

/// [model] block.
InlierModel model_from_config(const Config& section);

/// [contamination] block; `fraction` resolves to ceil(fraction * n).
ContaminationStrategy strategy_from_config(const Config& section, int n, int dim);

/// [solver] block; missing keys keep their defaults.
SolverConfig solver_from_config(const Config& section);

}  // namespace mom::io
