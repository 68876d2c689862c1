#include "mom/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

namespace mom::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(std::string text) {
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream is(text);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) {
    // strtod rather than stod: stod rejects subnormals as out of range
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || (std::isinf(v) && tok.find_first_of("iI") == std::string::npos))
      throw UsageError("not a number: '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Vector broadcast(const std::string& text, int dim, const char* what) {
  Vector v = parse_vector(text);
  if (v.size() == 1 && dim > 1) return Vector::Constant(dim, v(0));
  require_dim(v.size(), dim, what);
  return v;
}

CovarianceModel covariance_from_config(const Config& section, int dim) {
  const std::string kind = section.get<std::string>("covariance", "identity");
  if (kind == "identity") return CovarianceModel::identity(dim);
  if (kind == "diagonal") return CovarianceModel::diagonal(broadcast(section.get<std::string>("covariance_values"), dim, "covariance_values"));
  if (kind == "dense") {
    Matrix m = parse_matrix(section.get<std::string>("covariance_values"));
    require(m.rows() == dim && m.cols() == dim, "dense covariance must be dimension x dimension");
    return CovarianceModel::dense(m);
  }
  throw UsageError("unknown covariance kind '" + kind + "'");
}

}  // namespace

Vector parse_vector(const std::string& text) {
  const auto nums = parse_numbers(text);
  require(!nums.empty(), "empty vector");
  return Eigen::Map<const Vector>(nums.data(), static_cast<Eigen::Index>(nums.size()));
}

Matrix parse_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream is(text);
  std::string row;
  while (std::getline(is, row, ';')) {
    if (trim(row).empty()) continue;
    rows.push_back(parse_numbers(row));
  }
  require(!rows.empty(), "empty matrix");
  const auto cols = rows.front().size();
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == cols, "matrix rows have different lengths");
    for (std::size_t j = 0; j < cols; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

std::string format_vector(const Vector& v) {
  std::string out;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (j) out += ", ";
    out += format_double(v(j));
  }
  return out;
}

Matrix read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open dataset '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    rows.push_back(parse_numbers(t));
    require(rows.back().size() == rows.front().size(), "dataset '" + path + "' has ragged rows");
  }
  require(!rows.empty(), "dataset '" + path + "' is empty");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

void write_dataset(const std::string& path, const Matrix& data) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write dataset '" + path + "'");
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      if (j) out << ',';
      out << format_double(data(i, j));
    }
    out << '\n';
  }
}

void write_sidecar(const std::string& path, const ContaminatedDataset& ds, const std::string& strategy) {
  Config cfg;
  cfg.put("contamination.strategy", strategy);
  cfg.put("contamination.count", ds.outliers.size());
  std::string idx;
  for (std::size_t i = 0; i < ds.outliers.size(); ++i) idx += (i ? "," : "") + std::to_string(ds.outliers[i]);
  cfg.put("contamination.outliers", idx);
  cfg.put("contamination.seed", ds.seed);
  cfg.put("data.rows", ds.data.rows());
  cfg.put("data.columns", ds.data.cols());
  cfg.put("data.model", ds.model_echo);
  boost::property_tree::write_ini(path, cfg);
}

std::vector<int> read_sidecar_outliers(const std::string& path) {
  const Config cfg = read_config(path);
  const std::string text = cfg.get<std::string>("contamination.outliers", "");
  std::vector<int> out;
  for (double v : parse_numbers(text)) out.push_back(static_cast<int>(v));
  return out;
}

Config read_config(const std::string& path) {
  Config cfg;
  try {
    boost::property_tree::read_ini(path, cfg);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  return cfg;
}

Config parse_config(const std::string& text) {
  std::istringstream is(text);
  Config cfg;
  try {
    boost::property_tree::read_ini(is, cfg);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  return cfg;
}

std::string format_config(const Config& cfg) {
  std::ostringstream os;
  boost::property_tree::write_ini(os, cfg);
  return os.str();
}

SymmetricSet set_from_config(const Config& section) {
  const std::string kind = section.get<std::string>("kind");
  if (kind == "points") {
    Matrix pts = parse_matrix(section.get<std::string>("points"));
    if (auto d = section.get_optional<int>("dimension")) require_dim(pts.cols(), *d, "set points");
    return SymmetricSet::finite_points(pts);
  }
  const int dim = section.get<int>("dimension");
  if (kind == "cross") return SymmetricSet::cross(dim);
  if (kind == "ball") return SymmetricSet::ball(dim, section.get<double>("radius", 1.0));
  throw UsageError("unknown set kind '" + kind + "' (expected cross, ball or points)");
}

Config set_to_config(const SymmetricSet& s) {
  Config c;
  c.put("kind", s.kind());
  c.put("dimension", s.dim());
  if (const auto* b = std::get_if<SymmetricSet::EuclideanBall>(&s.rep())) c.put("radius", format_double(b->radius));
  if (const auto* f = std::get_if<SymmetricSet::FinitePoints>(&s.rep())) {
    std::string rows;
    for (std::size_t i = 0; i < f->points.size(); ++i) rows += (i ? "; " : "") + format_vector(f->points[i]);
    c.put("points", rows);
  }
  return c;
}

InlierModel model_from_config(const Config& section) {
  const std::string kind = section.get<std::string>("kind");
  const int dim = section.get<int>("dimension");
  require(dim >= 1, "model dimension must be >= 1");
  const Vector loc = broadcast(section.get<std::string>("location", "0"), dim, "model location");
  if (kind == "gaussian") return InlierModel::gaussian(loc, covariance_from_config(section, dim));
  if (kind == "coord_cauchy") return InlierModel::coord_cauchy(loc, broadcast(section.get<std::string>("scale", "1"), dim, "model scale"));
  if (kind == "spherical_chi") return InlierModel::spherical(loc, RadialLaw::chi);
  if (kind == "spherical_half_cauchy") return InlierModel::spherical(loc, RadialLaw::half_cauchy);
  if (kind == "student_t") return InlierModel::student_t(loc, covariance_from_config(section, dim), section.get<double>("dof"));
  throw UsageError("unknown model kind '" + kind + "'");
}

ContaminationStrategy strategy_from_config(const Config& section, int n, int dim) {
  const std::string kind = section.get<std::string>("kind", "none");
  if (kind == "none") return NoContamination{};
  int count = 0;
  if (auto c = section.get_optional<int>("count")) {
    count = *c;
  } else if (auto f = section.get_optional<double>("fraction")) {
    require(*f >= 0.0 && *f <= 1.0, "contamination fraction must be in [0, 1]");
    count = static_cast<int>(std::ceil(*f * n));
  } else {
    throw UsageError("contamination needs count or fraction");
  }
  require(count >= 0 && count <= n, "contamination count must be in [0, N]");
  if (kind == "far_point") {
    const std::string dir = section.get<std::string>("direction", "random");
    const double magnitude = section.get<double>("magnitude", 1e6);
    if (dir == "random") return FarPoint{count, magnitude, DirectionRule::random_unit, Vector()};
    return FarPoint{count, magnitude, DirectionRule::fixed, broadcast(dir, dim, "far-point direction")};
  }
  if (kind == "largest_norm") return LargestNorm{count, broadcast(section.get<std::string>("replacement", "0"), dim, "replacement")};
  if (kind == "mean_shift") return MeanShiftCluster{count, broadcast(section.get<std::string>("shift"), dim, "shift")};
  throw UsageError("unknown contamination kind '" + kind + "'");
}

SolverConfig solver_from_config(const Config& section) {
  SolverConfig c;
  c.max_outer_iters = section.get<int>("max_outer_iters", c.max_outer_iters);
  if (auto v = section.get_optional<double>("theta0")) c.theta0 = *v;
  c.eta0 = section.get<double>("eta0", c.eta0);
  if (auto v = section.get_optional<double>("epsilon")) c.epsilon = *v;
  c.stall_iters = section.get<int>("stall_iters", c.stall_iters);
  const std::string mode = section.get<std::string>("partition_mode", "fixed");
  require(mode == "fixed" || mode == "rerandomized", "partition_mode must be fixed or rerandomized");
  c.partition_mode = mode == "fixed" ? PartitionMode::fixed : PartitionMode::rerandomized;
  c.seed = section.get<std::uint64_t>("seed", c.seed);
  c.inner.restarts = section.get<int>("inner_restarts", c.inner.restarts);
  c.inner.max_iters = section.get<int>("inner_max_iters", c.inner.max_iters);
  c.inner.initial_step = section.get<double>("inner_initial_step", c.inner.initial_step);
  c.inner.tolerance = section.get<double>("inner_tolerance", c.inner.tolerance);
  c.inner.patience = section.get<int>("inner_patience", c.inner.patience);
  c.inner.seed = section.get<std::uint64_t>("inner_seed", c.inner.seed);
  c.warm_restarts = section.get<int>("warm_restarts", c.warm_restarts);
  return c;
}

}  // namespace mom::io
