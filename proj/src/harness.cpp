#include "siac/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <numbers>
#include <sstream>
#include <tuple>

#include "siac/errors.hpp"

namespace siac {

std::string to_string(Region region) {
  switch (region) {
    case Region::LeftBoundary: return "left";
    case Region::RightBoundary: return "right";
    case Region::Interior: return "interior";
    case Region::FullDomain: return "full";
  }
  return "?";
}

std::string to_string(Norm norm) { return norm == Norm::L2 ? "L2" : "Linf"; }

Region parse_region(std::string_view text) {
  for (Region r : {Region::LeftBoundary, Region::RightBoundary, Region::Interior, Region::FullDomain})
    if (to_string(r) == text) return r;
  throw ParseError("unknown region '" + std::string(text) + "'");
}

Norm parse_norm(std::string_view text) {
  if (text == "L2") return Norm::L2;
  if (text == "Linf") return Norm::Linf;
  throw ParseError("unknown norm '" + std::string(text) + "'");
}

FilterChoice parse_filter_choice(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  FilterChoice c;
  if (lower == "dg" || lower == "raw" || lower == "dg-raw") {
    c.name = "DG";
    c.raw = true;
    return c;
  }
  c.family = parse_family(text, &c.npk_degree);
  c.name = c.family == Family::NPk ? "NP" + std::to_string(c.npk_degree) : to_string(c.family);
  return c;
}

void RunConfig::validate() const {
  if (problem < 1 || problem > 3) throw InvalidArgument("problem must be 1, 2 or 3");
  if (d < 1) throw InvalidArgument("DG degree must be at least 1");
  if (meshes.empty()) throw InvalidArgument("mesh list is empty");
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    if (meshes[i] < 1) throw InvalidArgument("mesh sizes must be positive");
    if (i > 0 && meshes[i] != 2 * meshes[i - 1]) throw InvalidArgument("each mesh size must double the previous one");
  }
  for (double t : times)
    if (!(t >= 0.0)) throw InvalidArgument("final times must be nonnegative");
  if (samples < 2) throw InvalidArgument("need at least two samples per element");
  if (rho < 1) throw InvalidArgument("blend order must be at least 1");
  if (cfl < 0.0) throw InvalidArgument("cfl must be positive");
  if (jobs < 1) throw InvalidArgument("jobs must be at least 1");
  for (const auto& f : filters) parse_filter_choice(f);
}

std::vector<double> default_times(int problem) {
  const double two_pi = 2.0 * std::numbers::pi;
  const auto grid = [](int n, double end) {
    std::vector<double> t;
    for (int i = 1; i <= n; ++i) t.push_back(end * i / n);
    return t;
  };
  switch (problem) {
    case 1: return grid(50, 1.0);
    case 2: return grid(50, two_pi);
    case 3: return grid(30, two_pi);
    default: throw InvalidArgument("unknown test problem " + std::to_string(problem));
  }
}

bool record_less(const Record& a, const Record& b) {
  return std::tie(a.problem, a.d, a.filter, a.region, a.norm, a.N, a.T, a.kind) <
         std::tie(b.problem, b.d, b.filter, b.region, b.norm, b.N, b.T, b.kind);
}

// ---------------------------------------------------------------------------
// Norms and rates

NormPair region_norms(const std::function<double(double)>& err, double lo, double hi, const Mesh& mesh, int samples) {
  if (!(hi > lo)) throw EmptyRegion("region [" + std::to_string(lo) + ", " + std::to_string(hi) + "] is empty");
  if (samples < 2) throw InvalidArgument("need at least two samples per element");
  const double h = mesh.h();
  NormPair out;

  // L-infinity on uniform cells of width about h.
  const int cells = std::max(1, static_cast<int>(std::ceil((hi - lo) / h - 1e-9)));
  const double width = (hi - lo) / cells;
  for (int c = 0; c < cells; ++c)
    for (int s = 0; s < samples; ++s) {
      const double x = c + 1 == cells && s + 1 == samples ? hi : lo + width * (c + static_cast<double>(s) / (samples - 1));
      out.linf = std::max(out.linf, std::abs(err(x)));
    }

  // L2 on cells split at half-element points.
  std::vector<double> cuts{lo, hi};
  const double half = 0.5 * h;
  for (long k = static_cast<long>(std::ceil((lo - mesh.a) / half)); mesh.a + k * half < hi; ++k) {
    const double x = mesh.a + k * half;
    if (x > lo + 1e-12 * h) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  static const GaussRule rule = gauss_legendre(6);
  double sum = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double x0 = cuts[c];
    const double x1 = cuts[c + 1];
    if (!(x1 > x0)) continue;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double e = err(0.5 * (x0 + x1) + 0.5 * (x1 - x0) * rule.nodes[q]);
      sum += 0.5 * (x1 - x0) * rule.weights[q] * e * e;
    }
  }
  out.l2 = std::sqrt(sum);
  return out;
}

double convergence_rate(double e_2h, double e_h) {
  if (!(e_2h > 0.0) || !(e_h > 0.0)) throw NonpositiveError("convergence rate needs positive errors");
  return std::log(e_2h / e_h) / std::log(2.0);
}

// ---------------------------------------------------------------------------
// Pipelines

FilterPipeline::FilterPipeline(const FilterChoice& choice, int d, bool blend, int rho, BlendProfile profile)
    : choice_(choice), d_(d), blend_(blend), rho_(rho), profile_(profile) {
  if (choice_.raw) return;
  if (choice_.family == Family::Symmetric) {
    symmetric_.emplace(build_spec(Family::Symmetric, d, Side::Interior));
    return;
  }
  for (Side side : {Side::Left, Side::Right})
    boundary_.emplace_back(build_spec(choice_.family, d, side, choice_.npk_degree), d);
  if (blend_) symmetric_.emplace(build_spec(Family::Symmetric, d, Side::Interior));
}

std::vector<RegionEvaluator> FilterPipeline::regions(const DGField& field) const {
  const Mesh& mesh = field.mesh;
  const double h = mesh.h();
  const double strip = blend_ ? 2.0 * h : 0.0;
  std::vector<RegionEvaluator> out;
  if (choice_.raw) {
    out.push_back({Region::FullDomain, mesh.a, mesh.b, [field](double x) { return field(x); }});
    return out;
  }
  if (boundary_.empty()) {
    const auto [lo, hi] = symmetric_->region(mesh);
    const SymmetricFilter* sym = &*symmetric_;
    out.push_back({Region::Interior, lo + strip, hi - strip, [sym, field](double x) { return (*sym)(field, x); }});
    return out;
  }
  for (const auto& filter : boundary_) {
    const BoundaryPolynomial poly = filter.apply(field);
    const bool left = filter.spec().side == Side::Left;
    const Region region = left ? Region::LeftBoundary : Region::RightBoundary;
    const double lo = left ? poly.lo : poly.lo - strip;
    const double hi = left ? poly.hi + strip : poly.hi;
    if (!blend_) {
      out.push_back({region, lo, hi, [poly](double x) { return poly(x); }});
      continue;
    }
    const SymmetricFilter* sym = &*symmetric_;
    const double a1 = left ? poly.hi : poly.lo;
    const double a2 = left ? poly.hi + strip : poly.lo - strip;
    BlendedEvaluator blended(poly, [sym, field](double x) { return (*sym)(field, x); }, a1, a2, rho_, profile_);
    out.push_back({region, lo, hi, [blended](double x) { return blended(x); }});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Experiment

std::vector<Record> time_series_experiment(const RunConfig& config) {
  config.validate();
  const TestProblem problem = make_test_problem(config.problem);
  const std::vector<double> times = config.times.empty() ? default_times(config.problem) : config.times;
  const double cfl = config.cfl > 0.0 ? config.cfl : default_cfl(config.d);
  const std::string problem_name = "TP" + std::to_string(config.problem);

  std::vector<FilterPipeline> pipelines;
  for (const auto& name : config.filters)
    pipelines.emplace_back(parse_filter_choice(name), config.d, config.blend, config.rho, config.profile);
  if (pipelines.empty()) return {};

  struct Job {
    int N;
    double T;
  };
  std::vector<Job> jobs;
  for (int N : config.meshes)
    for (double T : times) jobs.push_back({N, T});

  const auto run = [&](const Job& job) {
    std::vector<Record> rows;
    const Mesh mesh(problem.a, problem.b, job.N);
    const DGField field = dg_solve(problem, mesh, config.d, job.T, cfl);
    for (const auto& pipeline : pipelines) {
      for (const auto& reg : pipeline.regions(field)) {
        const auto err = [&](double x) { return reg.eval(x) - problem.exact(x, job.T); };
        const NormPair n = region_norms(err, reg.lo, reg.hi, mesh, config.samples);
        for (auto [norm, value] : {std::pair{Norm::L2, n.l2}, std::pair{Norm::Linf, n.linf}})
          rows.push_back({problem_name, config.d, pipeline.choice().name, reg.region, norm, job.N, job.T, value, "error"});
      }
    }
    return rows;
  };

  // Runs are independent; results are merged in job order and sorted.
  std::vector<Record> records;
  for (std::size_t start = 0; start < jobs.size(); start += config.jobs) {
    std::vector<std::future<std::vector<Record>>> batch;
    for (std::size_t i = start; i < std::min(jobs.size(), start + config.jobs); ++i)
      batch.push_back(std::async(config.jobs > 1 ? std::launch::async : std::launch::deferred, run, jobs[i]));
    for (auto& f : batch) {
      auto rows = f.get();
      records.insert(records.end(), rows.begin(), rows.end());
    }
  }

  // Rates across consecutive meshes with matching keys.
  std::map<std::tuple<std::string, Region, Norm, double, int>, double> lookup;
  for (const auto& r : records) lookup[{r.filter, r.region, r.norm, r.T, r.N}] = r.value;
  std::vector<Record> rates;
  for (const auto& r : records) {
    const auto coarse = lookup.find({r.filter, r.region, r.norm, r.T, r.N / 2});
    if (r.N % 2 != 0 || coarse == lookup.end()) continue;
    if (!(coarse->second > 0.0) || !(r.value > 0.0)) continue;
    Record rate = r;
    rate.kind = "rate";
    rate.value = convergence_rate(coarse->second, r.value);
    rates.push_back(rate);
  }
  records.insert(records.end(), rates.begin(), rates.end());
  std::sort(records.begin(), records.end(), record_less);
  return records;
}

// ---------------------------------------------------------------------------
// CSV

std::string csv_header() { return "problem,d,filter,region,norm,N,T,value,kind"; }

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string format_record(const Record& r) {
  return r.problem + "," + std::to_string(r.d) + "," + r.filter + "," + to_string(r.region) + "," +
         to_string(r.norm) + "," + std::to_string(r.N) + "," + g17(r.T) + "," + g17(r.value) + "," + r.kind;
}

void write_csv(const std::vector<Record>& records, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << csv_header() << '\n';
  for (const auto& r : records) out << format_record(r) << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::vector<Record> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != csv_header()) throw ParseError("'" + path + "' lacks the expected header");
  std::vector<Record> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 9) throw ParseError("line " + std::to_string(lineno) + ": expected 9 fields");
    try {
      Record r;
      r.problem = f[0];
      r.d = std::stoi(f[1]);
      r.filter = f[2];
      r.region = parse_region(f[3]);
      r.norm = parse_norm(f[4]);
      r.N = std::stoi(f[5]);
      r.T = std::stod(f[6]);
      r.value = std::stod(f[7]);
      r.kind = f[8];
      out.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ParseError("line " + std::to_string(lineno) + ": malformed number");
    }
  }
  return out;
}

}  // namespace siac
