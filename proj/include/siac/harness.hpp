#pragma once

// Experiment protocol: region-restricted error norms, convergence rates and
// final-time series across filters, degrees and meshes.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "siac/dg.hpp"
#include "siac/filters.hpp"
#include "siac/psiac.hpp"

namespace siac {

enum class Region { LeftBoundary, RightBoundary, Interior, FullDomain };
enum class Norm { L2, Linf };

std::string to_string(Region region);
std::string to_string(Norm norm);
Region parse_region(std::string_view text);
Norm parse_norm(std::string_view text);

/// A filter column of an experiment: raw DG output or one filter family.
struct FilterChoice {
  std::string name;  // "DG", "symmetric", "SRV", "RLKV", "RS", "NP0", ...
  bool raw = false;
  Family family = Family::Symmetric;
  int npk_degree = 0;
};
FilterChoice parse_filter_choice(std::string_view text);

struct RunConfig {
  int problem = 1;
  int d = 1;
  std::vector<std::string> filters{"DG", "symmetric", "NP0"};
  std::vector<int> meshes{20, 40, 80, 160};
  std::vector<double> times;  // empty: the problem's default grid
  int samples = 6;            // per element, endpoints included
  bool blend = true;
  int rho = 2;
  BlendProfile profile = BlendProfile::Hermite;
  double cfl = 0.0;  // 0: default_cfl(d)
  int jobs = 1;

  /// Throws InvalidArgument for malformed configurations.
  void validate() const;
};

/// Uniform final times i * T_end / n, i = 1..n:
/// 50 on [0,1] for problem 1, 50 on [0,2 pi] for problem 2, 30 on [0,2 pi] for problem 3.
std::vector<double> default_times(int problem);

/// One CSV row. kind is "error" or "rate"; rate rows carry the finer mesh N.
struct Record {
  std::string problem;
  int d = 0;
  std::string filter;
  Region region = Region::FullDomain;
  Norm norm = Norm::L2;
  int N = 0;
  double T = 0.0;
  double value = 0.0;
  std::string kind = "error";
};

bool record_less(const Record& a, const Record& b);

struct NormPair {
  double l2 = 0.0;
  double linf = 0.0;
};

/// L-infinity over `samples` uniform points per cell (endpoints included) and
/// L2 by composite 6-point Gauss-Legendre on cells split at every half-element
/// point a + k h/2. Cells have width about h.
NormPair region_norms(const std::function<double(double)>& err, double lo, double hi, const Mesh& mesh,
                      int samples = 6);

/// ln(e_2h / e_h) / ln 2.
double convergence_rate(double e_2h, double e_h);

/// Filtered evaluators and regions of one filter choice on one field.
struct RegionEvaluator {
  Region region;
  double lo;
  double hi;
  std::function<double(double)> eval;
};

/// Precomputed filters for one (d, filter) pair, reused across meshes and times.
class FilterPipeline {
 public:
  FilterPipeline(const FilterChoice& choice, int d, bool blend, int rho, BlendProfile profile);

  const FilterChoice& choice() const { return choice_; }
  /// Evaluators for every region this filter is measured on.
  std::vector<RegionEvaluator> regions(const DGField& field) const;

 private:
  FilterChoice choice_;
  int d_;
  bool blend_;
  int rho_;
  BlendProfile profile_;
  std::vector<BoundaryFilter> boundary_;  // left, right
  std::optional<SymmetricFilter> symmetric_;
};

std::vector<Record> time_series_experiment(const RunConfig& config);

void write_csv(const std::vector<Record>& records, const std::string& path);
std::string csv_header();
std::string format_record(const Record& r);
std::vector<Record> read_csv(const std::string& path);

}  // namespace siac
