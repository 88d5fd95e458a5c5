#include "siac/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>

#include "siac/config.hpp"
#include "siac/dg.hpp"
#include "siac/errors.hpp"
#include "siac/filters.hpp"
#include "siac/harness.hpp"
#include "siac/psiac.hpp"

namespace siac {

std::string resolve_output_path(const std::string& path) {
  const std::filesystem::path p(path);
  const char* dir = std::getenv("SIAC_OUT_DIR");
  if (p.is_absolute() || dir == nullptr || *dir == '\0') return path;
  return (std::filesystem::path(dir) / p).string();
}

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Output sink: a file when a path is given, otherwise the provided stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
      return;
    }
    const std::string resolved = resolve_output_path(path);
    const auto parent = std::filesystem::path(resolved).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    file_ = std::make_unique<std::ofstream>(resolved, std::ios::trunc);
    if (!*file_) throw IoError("cannot open '" + resolved + "' for writing");
    stream_ = file_.get();
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

// Validation failures exit with 2, failures while computing with 1.
int staged(std::ostream& err, const std::function<void()>& validate, const std::function<void()>& run) {
  try {
    validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  try {
    run();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

void check_problem(int problem) {
  if (problem < 1 || problem > 3) throw InvalidArgument("problem must be 1, 2 or 3");
}

// ---------------------------------------------------------------------------

struct KernelArgs {
  std::string family;
  int d = 1;
  std::string side = "left";
  bool exact = false;
  int samples = 0;
  bool endpoint = false;
  std::string shift = "0";
  std::string out;
};

int cmd_kernel(const KernelArgs& args, std::ostream& out, std::ostream& err) {
  FilterSpec spec;
  Rational shift;
  return staged(
      err,
      [&] {
        int npk = 0;
        const Family family = parse_family(args.family, &npk);
        spec = build_spec(family, args.d, parse_side(args.side), npk);
        shift = Rational::parse(args.shift);
        if (args.samples < 0 || args.samples == 1) throw InvalidArgument("--samples needs at least 2 points");
        if (args.endpoint && spec.side == Side::Interior) throw InvalidArgument("--endpoint needs a boundary kernel");
      },
      [&] {
        Sink sink(args.out, out);
        std::ostream& os = *sink;
        if (args.samples > 0) {
          const auto c = spec.side == Side::Interior ? static_coefficients(spec) : coefficients_for_shift(spec, shift);
          const PiecewisePolynomial k = kernel_piecewise(spec, c, shift);
          const double lo = k.breakpoints.front().to_double();
          const double hi = k.breakpoints.back().to_double();
          os << "x,value\n";
          for (int i = 0; i < args.samples; ++i) {
            const double x = lo + (hi - lo) * i / (args.samples - 1);
            os << g17(x) << ',' << g17(k.eval(x)) << '\n';
          }
          return;
        }
        if (args.endpoint) {
          // Weights on the window's Bernstein coefficients at the domain end.
          const RatMatrix q = q_matrix(spec, args.d);
          const Rational xi = -spec.anchor_offset();
          const auto v = endpoint_vector(q, xi);
          os << "i,element,index,value,approx\n";
          for (std::size_t i = 0; i < v.size(); ++i)
            os << i << ',' << i / (args.d + 1) << ',' << i % (args.d + 1) << ',' << v[i].to_string() << ','
               << g17(v[i].to_double()) << '\n';
          return;
        }
        const CoefficientPolynomials c = shifted_coefficient_polynomials(spec);
        os << "j,degree,knots";
        for (std::size_t m = 0; m < spec.size(); ++m) os << ",c_" << m;
        os << '\n';
        for (std::size_t j = 0; j < spec.size(); ++j) {
          os << spec.index_set[j] << ',' << spec.splines[j].degree << ',';
          const auto& w = spec.splines[j].window.knots();
          for (std::size_t i = 0; i < w.size(); ++i) os << (i ? " " : "") << w[i].to_string();
          for (std::size_t m = 0; m < spec.size(); ++m) os << ',' << c.matrix(j, m).to_string();
          os << '\n';
        }
      });
}

// ---------------------------------------------------------------------------

struct SolveArgs {
  int problem = 1;
  int d = 1;
  int N = 20;
  double T = 1.0;
  double cfl = 0.0;
  int samples = 6;
  std::string basis = "legendre";
  std::string coeffs;
  std::string out;
};

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
  return staged(
      err,
      [&] {
        check_problem(args.problem);
        if (args.d < 0) throw InvalidArgument("degree must be nonnegative");
        if (args.N < 1) throw InvalidArgument("N must be positive");
        if (args.T < 0.0) throw InvalidArgument("T must be nonnegative");
        if (args.cfl < 0.0) throw InvalidArgument("cfl must be positive");
        if (args.samples < 2) throw InvalidArgument("need at least 2 samples per element");
        if (args.basis != "legendre" && args.basis != "bernstein") throw InvalidArgument("basis must be legendre or bernstein");
      },
      [&] {
        const TestProblem problem = make_test_problem(args.problem);
        const Mesh mesh(problem.a, problem.b, args.N);
        DGField field = dg_solve(problem, mesh, args.d, args.T, args.cfl > 0.0 ? args.cfl : default_cfl(args.d));
        if (!args.coeffs.empty()) {
          Sink sink(args.coeffs, out);
          const DGField shown = args.basis == "bernstein" ? to_bernstein(field) : field;
          *sink << "element,index,coefficient\n";
          for (int e = 0; e < mesh.N; ++e)
            for (int l = 0; l <= args.d; ++l) *sink << e << ',' << l << ',' << g17(shown.coeff(e, l)) << '\n';
        }
        Sink sink(args.out, out);
        *sink << "x,u,exact,error\n";
        for (int e = 0; e < mesh.N; ++e)
          for (int s = 0; s < args.samples; ++s) {
            const double x = mesh.breakpoint(e) + mesh.h() * s / (args.samples - 1);
            const double u = field.eval_element(e, x);
            const double ex = problem.exact(x, args.T);
            *sink << g17(x) << ',' << g17(u) << ',' << g17(ex) << ',' << g17(u - ex) << '\n';
          }
      });
}

// ---------------------------------------------------------------------------

struct FilterArgs {
  int problem = 1;
  int d = 1;
  int N = 20;
  double T = 1.0;
  double cfl = 0.0;
  std::string family = "NP0";
  std::string side = "both";
  bool no_blend = false;
  int rho = 2;
  std::string profile = "hermite";
  int samples = 6;
  std::string poly;
  std::string out;
};

int cmd_filter(const FilterArgs& args, std::ostream& out, std::ostream& err) {
  FilterChoice choice;
  BlendProfile profile = BlendProfile::Hermite;
  std::vector<Side> sides;
  return staged(
      err,
      [&] {
        check_problem(args.problem);
        if (args.d < 1) throw InvalidArgument("degree must be at least 1");
        if (args.N < 1) throw InvalidArgument("N must be positive");
        if (args.T < 0.0) throw InvalidArgument("T must be nonnegative");
        if (args.samples < 2) throw InvalidArgument("need at least 2 samples per element");
        if (args.rho < 1) throw InvalidArgument("rho must be at least 1");
        choice = parse_filter_choice(args.family);
        if (choice.raw) throw InvalidArgument("--family needs a filter family");
        if (args.profile == "literal") profile = BlendProfile::Literal;
        else if (args.profile != "hermite") throw InvalidArgument("profile must be hermite or literal");
        if (choice.family == Family::Symmetric) {
          if (args.side != "both" && args.side != "interior")
            throw UnsupportedFamilySide("the symmetric filter only applies in the interior");
          sides = {Side::Interior};
        } else if (args.side == "both") {
          sides = {Side::Left, Side::Right};
        } else {
          sides = {parse_side(args.side)};
          if (sides[0] == Side::Interior) throw UnsupportedFamilySide(choice.name + " is a boundary filter");
        }
      },
      [&] {
        const TestProblem problem = make_test_problem(args.problem);
        const Mesh mesh(problem.a, problem.b, args.N);
        const DGField field = dg_solve(problem, mesh, args.d, args.T, args.cfl > 0.0 ? args.cfl : default_cfl(args.d));
        const FilterPipeline pipeline(choice, args.d, !args.no_blend, args.rho, profile);

        if (!args.poly.empty() && choice.family != Family::Symmetric) {
          Sink sink(args.poly, out);
          *sink << "side,k,xi_coefficient,physical_coefficient,exact\n";
          const DGField bern = to_bernstein(field);
          for (Side side : sides) {
            const BoundaryFilter filter(build_spec(choice.family, args.d, side, choice.npk_degree), args.d);
            const BoundaryPolynomial p = filter.apply(field);
            std::vector<Rational> window;
            const int first = filter.first_element(mesh.N);
            for (int e = first; e < first + filter.elements(); ++e)
              for (double c : bern.element(e)) window.push_back(Rational::from_double(c));
            const RatPoly exact = filter.apply_exact(window);
            const auto phys = p.physical_coefficients();
            for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
              const Rational ek = k < exact.coeffs().size() ? exact.coeffs()[k] : Rational(0);
              *sink << to_string(side) << ',' << k << ',' << g17(p.coeffs[k]) << ',' << g17(phys[k]) << ','
                    << ek.to_string() << '\n';
            }
          }
        }

        Sink sink(args.out, out);
        *sink << "region,x,value,exact,abs_error\n";
        for (const auto& reg : pipeline.regions(field)) {
          const bool wanted = std::any_of(sides.begin(), sides.end(), [&](Side s) {
            return (s == Side::Left && reg.region == Region::LeftBoundary) ||
                   (s == Side::Right && reg.region == Region::RightBoundary) ||
                   (s == Side::Interior && reg.region == Region::Interior);
          });
          if (!wanted) continue;
          const int cells = std::max(1, static_cast<int>(std::ceil((reg.hi - reg.lo) / mesh.h() - 1e-9)));
          const int count = cells * (args.samples - 1) + 1;
          for (int i = 0; i < count; ++i) {
            const double x = i + 1 == count ? reg.hi : reg.lo + (reg.hi - reg.lo) * i / (count - 1);
            const double v = reg.eval(x);
            const double ex = problem.exact(x, args.T);
            *sink << to_string(reg.region) << ',' << g17(x) << ',' << g17(v) << ',' << g17(ex) << ','
                  << g17(std::abs(v - ex)) << '\n';
          }
        }
      });
}

// ---------------------------------------------------------------------------

struct ExperimentArgs {
  std::string config;
  int problem = 1;
  int d = 1;
  std::vector<std::string> filters;
  std::vector<int> meshes;
  std::vector<double> times;
  int time_count = 0;
  double time_end = 0.0;
  int samples = 6;
  int rho = 2;
  bool no_blend = false;
  int jobs = 1;
  double T = 1.0;
  std::vector<double> errors;
  std::string out;
};

struct ExperimentOptions {
  CLI::Option* problem = nullptr;
  CLI::Option* d = nullptr;
  CLI::Option* filters = nullptr;
  CLI::Option* meshes = nullptr;
  CLI::Option* times = nullptr;
  CLI::Option* time_count = nullptr;
  CLI::Option* time_end = nullptr;
  CLI::Option* samples = nullptr;
  CLI::Option* rho = nullptr;
  CLI::Option* no_blend = nullptr;
  CLI::Option* jobs = nullptr;
  CLI::Option* T = nullptr;
};

// Flags given on the command line override the config file.
RunConfig merge_config(const ExperimentArgs& args, const ExperimentOptions& opt, std::string* out_path) {
  RunConfig config;
  if (!args.config.empty()) {
    ConfigMap extra;
    apply_config(read_config_file(args.config), config, &extra);
    if (out_path && extra.count("out")) *out_path = extra["out"];
  }
  if (opt.problem->count()) config.problem = args.problem;
  if (opt.d->count()) config.d = args.d;
  if (opt.filters->count()) config.filters = args.filters;
  if (opt.meshes->count()) config.meshes = args.meshes;
  if (opt.times && opt.times->count()) config.times = args.times;
  if (opt.time_count && (opt.time_count->count() || opt.time_end->count())) {
    if (args.time_count < 1 || !(args.time_end > 0.0)) throw InvalidArgument("--time-count and --time-end go together");
    config.times.clear();
    for (int i = 1; i <= args.time_count; ++i) config.times.push_back(args.time_end * i / args.time_count);
  }
  // converge works at a single final time, 1 unless given.
  if (opt.T && (opt.T->count() || config.times.size() != 1)) config.times = {args.T};
  if (opt.samples->count()) config.samples = args.samples;
  if (opt.rho->count()) config.rho = args.rho;
  if (opt.no_blend->count()) config.blend = false;
  if (opt.jobs->count()) config.jobs = args.jobs;
  if (!args.out.empty() && out_path) *out_path = args.out;
  config.validate();
  return config;
}

ExperimentOptions add_experiment_options(CLI::App* cmd, ExperimentArgs& args) {
  ExperimentOptions o;
  o.problem = cmd->add_option("--problem", args.problem, "Test problem 1, 2 or 3");
  o.d = cmd->add_option("--d", args.d, "DG degree");
  o.filters = cmd->add_option("--filters", args.filters, "Comma-separated: DG, symmetric, SRV, RLKV, RS, NP0, NPk")
                  ->delimiter(',');
  o.meshes = cmd->add_option("--meshes", args.meshes, "Comma-separated element counts, each doubling")->delimiter(',');
  o.samples = cmd->add_option("--samples", args.samples, "Samples per element for the max norm");
  o.rho = cmd->add_option("--rho", args.rho, "Blending smoothness order");
  o.no_blend = cmd->add_flag("--no-blend", args.no_blend, "Measure boundary filters without the transition strip");
  o.jobs = cmd->add_option("--jobs", args.jobs, "Concurrent runs");
  cmd->add_option("--out", args.out, "Output CSV path");
  return o;
}

int cmd_experiment(const ExperimentArgs& args, const ExperimentOptions& opt, bool series, std::ostream& out,
                   std::ostream& err) {
  RunConfig config;
  std::string out_path;
  bool single_rate = false;
  return staged(
      err,
      [&] {
        if (!series && !args.errors.empty()) {
          if (args.errors.size() != 2) throw InvalidArgument("--errors takes exactly two values: e_2h,e_h");
          single_rate = true;
          return;
        }
        config = merge_config(args, opt, &out_path);
        if (series && out_path.empty())
          out_path = "timeseries_TP" + std::to_string(config.problem) + "_d" + std::to_string(config.d) + ".csv";
      },
      [&] {
        if (single_rate) {
          out << g17(convergence_rate(args.errors[0], args.errors[1])) << '\n';
          return;
        }
        const auto records = time_series_experiment(config);
        if (out_path.empty() || out_path == "-") {
          out << csv_header() << '\n';
          for (const auto& r : records) out << format_record(r) << '\n';
        } else {
          const std::string path = resolve_output_path(out_path);
          const auto parent = std::filesystem::path(path).parent_path();
          if (!parent.empty()) std::filesystem::create_directories(parent);
          write_csv(records, path);
          out << "wrote " << records.size() << " records to " << path << '\n';
        }
      });
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact SIAC and position-dependent boundary filters for DG output", "siac"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  KernelArgs kernel;
  auto* k = app.add_subcommand("kernel", "Kernel coefficients, samples or endpoint weights");
  k->add_option("family", kernel.family, "symmetric, RS, SRV, RLKV, NP0, NPk")->required();
  k->add_option("d", kernel.d, "DG degree")->required();
  k->add_option("side", kernel.side, "left, right or interior");
  auto* k_exact = k->add_flag("--exact", kernel.exact, "Exact coefficient polynomials (default)");
  auto* k_samples = k->add_option("--samples", kernel.samples, "Sample the kernel at n points");
  auto* k_endpoint = k->add_flag("--endpoint", kernel.endpoint, "Exact weights at the domain end");
  k_exact->excludes(k_samples)->excludes(k_endpoint);
  k_samples->excludes(k_endpoint);
  k->add_option("--shift", kernel.shift, "Knot shift xi in mesh units for --samples (decimal or p/q)");
  k->add_option("--out", kernel.out, "Output path (default stdout)");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Run the DG solver and sample the field");
  s->add_option("--problem", solve.problem, "Test problem 1, 2 or 3");
  s->add_option("--d", solve.d, "DG degree");
  s->add_option("--N", solve.N, "Element count");
  s->add_option("--T", solve.T, "Final time");
  s->add_option("--cfl", solve.cfl, "CFL number (default 0.1/(2d+1))");
  s->add_option("--samples", solve.samples, "Samples per element");
  s->add_option("--basis", solve.basis, "Coefficient basis: legendre or bernstein");
  s->add_option("--coeffs", solve.coeffs, "Write element coefficients here");
  s->add_option("--out", solve.out, "Sample output path (default stdout)");

  FilterArgs filter;
  auto* f = app.add_subcommand("filter", "Filter a DG solution");
  f->add_option("--problem", filter.problem, "Test problem 1, 2 or 3");
  f->add_option("--d", filter.d, "DG degree");
  f->add_option("--N", filter.N, "Element count");
  f->add_option("--T", filter.T, "Final time");
  f->add_option("--cfl", filter.cfl, "CFL number (default 0.1/(2d+1))");
  f->add_option("--family", filter.family, "symmetric, RS, SRV, RLKV, NP0, NPk");
  f->add_option("--side", filter.side, "left, right or both (interior for symmetric)");
  f->add_flag("--no-blend", filter.no_blend, "Skip the transition strip");
  f->add_option("--rho", filter.rho, "Blending smoothness order");
  f->add_option("--profile", filter.profile, "Blend weight: hermite or literal");
  f->add_option("--samples", filter.samples, "Samples per element");
  f->add_option("--poly", filter.poly, "Write boundary polynomial coefficients here");
  f->add_option("--out", filter.out, "Sample output path (default stdout)");

  ExperimentArgs converge;
  auto* c = app.add_subcommand("converge", "Errors and rates at one final time, or a rate from two errors");
  ExperimentOptions c_opt = add_experiment_options(c, converge);
  c->add_option("--config", converge.config, "Config file");
  c_opt.T = c->add_option("--T", converge.T, "Final time");
  c->add_option("--errors", converge.errors, "Two errors e_2h,e_h: print their rate")->delimiter(',');

  ExperimentArgs series;
  auto* t = app.add_subcommand("timeseries", "Errors and rates over a grid of final times");
  ExperimentOptions t_opt = add_experiment_options(t, series);
  t->add_option("config", series.config, "Config file");
  t_opt.times = t->add_option("--times", series.times, "Comma-separated final times")->delimiter(',');
  t_opt.time_count = t->add_option("--time-count", series.time_count, "Uniform final times i*end/n, i=1..n");
  t_opt.time_end = t->add_option("--time-end", series.time_end, "Last final time of the uniform grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*k) return cmd_kernel(kernel, out, err);
    if (*s) return cmd_solve(solve, out, err);
    if (*f) return cmd_filter(filter, out, err);
    if (*c) return cmd_experiment(converge, c_opt, false, out, err);
    if (*t) return cmd_experiment(series, t_opt, true, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace siac
