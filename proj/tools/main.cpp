#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lattice/approximation.hpp"
#include "lattice/bounds.hpp"
#include "lattice/cbc.hpp"
#include "lattice/criterion.hpp"
#include "lattice/index_set.hpp"
#include "lattice/io.hpp"
#include "lattice/korobov.hpp"
#include "lattice/util.hpp"
#include "lattice/weights.hpp"

namespace {

using namespace lattice;

// Inline JSON if the argument starts with '{', otherwise a file path.
std::string load_config_text(const std::string& arg) {
  if (!arg.empty() && arg[0] == '{') return arg;
  return read_text_file(arg);
}

WeightModel load_weights(const std::string& arg) {
  return weights_from_json(load_config_text(arg));
}

SpaceParams load_space(double alpha, int d, const std::string& weights_arg) {
  WeightModel w = load_weights(weights_arg);
  if (d == 0) d = w.dimension();
  return make_space_params(alpha, d, std::move(w));
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
}

std::string js(double v) { return format_double(v); }

struct MeasuredFunction {
  double l2_error = 0.0;
  FourierPolynomial coefficients{1};
};

// Shared by approx and sweep: build the approximation of one configured test
// function on the rule and measure its L2 error. Random polynomials are
// normalized to unit norm so the two-term bound applies to them directly.
MeasuredFunction measure_function(const CriterionContext& ctx, const GeneratingVector& gv,
                                  const IndexSet& A, const TestFunctionSpec& spec,
                                  std::uint64_t default_seed, bool seed_from_spec) {
  if (spec.kind == "random_polynomial") {
    const std::uint64_t seed = seed_from_spec ? spec.seed : default_seed;
    FourierPolynomial f = random_polynomial(ctx.space(), spec.M, seed);
    const double nf = std::sqrt(norm_squared(ctx.space(), f));
    f.scale(1.0 / nf);
    const std::vector<std::complex<double>> samples = sample_polynomial(gv, f);
    FourierPolynomial fa = apply_lattice_algorithm(gv, samples, A);
    return {l2_distance(f, fa), std::move(fa)};
  }
  if (static_cast<int>(spec.coefficients.size()) != ctx.d())
    throw ParseError("kernel product needs one coefficient per coordinate");
  const std::vector<std::complex<double>> samples = sample_kernel_product(ctx, gv, spec.coefficients);
  FourierPolynomial fa = apply_lattice_algorithm(gv, samples, A);
  return {kernel_product_l2_error(ctx.alpha(), spec.coefficients, fa), std::move(fa)};
}

struct BoundScan {
  ApproxErrorBound best;  // minimizer of the two-term bound over the scanned grid
};

BoundScan scan_bounds(const SpaceParams& params, int n, const std::vector<double>& grid,
                      std::optional<double> M, std::optional<double> S_value,
                      std::optional<double> xi) {
  BoundScan out;
  bool first = true;
  for (double lam : grid) {
    const ApproxErrorBound b = approx_error_bound(params, n, lam, M, S_value, xi);
    if (first || b.two_term < out.best.two_term) out.best = b;
    first = false;
  }
  return out;
}

std::vector<double> parse_lambda_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0') throw ParseError("bad lambda list entry: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("empty lambda list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const long v = std::strtol(item.c_str(), &end, 10);
    if (end == item.c_str() || *end != '\0') throw ParseError("bad integer list entry: " + item);
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw ParseError("empty integer list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank-1 lattice rules for approximation in weighted Korobov spaces"};
  app.require_subcommand(1);

  std::uint64_t seed = 12345;
  app.add_option("--seed", seed, "Seed for randomized test functions")->capture_default_str();

  struct {
    int n = 0;
    int d = 0;
    double alpha = 2.0;
    std::string weights;
    std::string out;
  } c;
  CLI::App* construct = app.add_subcommand("construct", "Component-by-component generating vector search");
  construct->add_option("--n", c.n, "Number of points (prime)")->required();
  construct->add_option("--d", c.d, "Dimension (defaults to the weight model's)");
  construct->add_option("--alpha", c.alpha, "Smoothness exponent")->required();
  construct->add_option("--weights", c.weights, "Weight config (JSON file or inline)")->required();
  construct->add_option("--out", c.out, "Output vector file")->required();

  struct {
    std::string vector;
    std::string weights;
    double alpha = 2.0;
    std::int64_t oracle_H = 0;
    std::string out;
  } k;
  CLI::App* criterion = app.add_subcommand("criterion", "Evaluate the search criterion of a stored vector");
  criterion->add_option("--vector", k.vector, "Vector file")->required();
  criterion->add_option("--weights", k.weights, "Weight config (JSON file or inline)")->required();
  criterion->add_option("--alpha", k.alpha, "Smoothness exponent")->required();
  criterion->add_option("--oracle", k.oracle_H, "Cross-check against the truncated direct sum over |h_j| <= H");
  criterion->add_option("--out", k.out, "Output path (stdout when omitted)");

  struct {
    double M = 0.0;
    std::string weights;
    double alpha = 2.0;
    std::int64_t budget = 20'000'000;
    std::string out;
  } ix;
  CLI::App* indexset = app.add_subcommand("indexset", "Enumerate the hyperbolic-cross style index set");
  indexset->add_option("--M", ix.M, "Cutoff: r(h) <= M")->required();
  indexset->add_option("--weights", ix.weights, "Weight config (JSON file or inline)")->required();
  indexset->add_option("--alpha", ix.alpha, "Smoothness exponent")->required();
  indexset->add_option("--budget", ix.budget, "Enumeration budget")->capture_default_str();
  indexset->add_option("--out", ix.out, "Output path (stdout when omitted)");

  struct {
    std::string function;
    std::string vector;
    double M = 0.0;
    std::string weights;
    double alpha = 2.0;
    std::string coefficients = "approx_coefficients.csv";
    std::string out;
  } a;
  CLI::App* approx = app.add_subcommand("approx", "Apply the lattice algorithm to a test function");
  approx->add_option("--function", a.function, "Test function config (JSON file or inline)")->required();
  approx->add_option("--vector", a.vector, "Vector file")->required();
  approx->add_option("--M", a.M, "Index set cutoff")->required();
  approx->add_option("--weights", a.weights, "Weight config (JSON file or inline)")->required();
  approx->add_option("--alpha", a.alpha, "Smoothness exponent")->required();
  approx->add_option("--coefficients", a.coefficients, "CSV dump of the computed coefficients")
      ->capture_default_str();
  approx->add_option("--out", a.out, "Output path (stdout when omitted)");

  struct {
    int n = 0;
    std::string weights;
    double alpha = 2.0;
    std::string lambda_grid_arg;
    double lambda = 0.0;
    double M = 0.0;
    double S = -1.0;
    double xi = 0.0;
    std::string out;
  } b;
  CLI::App* bound = app.add_subcommand("bound", "Error bounds at one lambda or minimized over a grid");
  bound->add_option("--n", b.n, "Number of points")->required();
  bound->add_option("--weights", b.weights, "Weight config (JSON file or inline)")->required();
  bound->add_option("--alpha", b.alpha, "Smoothness exponent")->required();
  bound->add_option("--lambda", b.lambda, "Single lambda in (1/alpha, 1]");
  bound->add_option("--lambda-grid", b.lambda_grid_arg, "Comma-separated lambdas (default: built-in grid)");
  bound->add_option("--M", b.M, "Truncation level (default n^{1/(2 lambda)})");
  bound->add_option("--S", b.S, "Measured criterion value to use instead of the envelope");
  bound->add_option("--xi", b.xi, "Decay certificate for the sharpened envelope");
  bound->add_option("--out", b.out, "Output path (stdout when omitted)");

  struct {
    std::string n_list;
    std::string weights;
    double alpha = 2.0;
    std::vector<std::string> functions;
    std::string out;
  } sw;
  CLI::App* sweep = app.add_subcommand("sweep", "Convergence table over a list of rule sizes");
  sweep->add_option("--n-list", sw.n_list, "Comma-separated primes")->required();
  sweep->add_option("--weights", sw.weights, "Weight config (JSON file or inline)")->required();
  sweep->add_option("--alpha", sw.alpha, "Smoothness exponent")->required();
  sweep->add_option("--function", sw.functions, "Test function config (repeatable)");
  sweep->add_option("--out", sw.out, "Output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (construct->parsed()) {
      SpaceParams params = load_space(c.alpha, c.d, c.weights);
      CriterionContext ctx(params, c.n);
      const CbcResult res = cbc_construct(ctx);
      VectorFileMetadata meta;
      meta.alpha = c.alpha;
      meta.weight_hash = weight_model_hash(params.weights);
      meta.criterion = S_d(ctx, res.rule);
      write_vector_file(c.out, res.rule, meta);
      std::cout << "criterion=" << js(*meta.criterion) << "\n";
    } else if (criterion->parsed()) {
      VectorFileMetadata meta;
      const GeneratingVector gv = read_vector_file(k.vector, &meta);
      SpaceParams params = load_space(k.alpha, gv.dim(), k.weights);
      CriterionContext ctx(params, gv.n);
      const double S = S_d(ctx, gv);
      const double e_int = worst_case_integration_error(ctx, gv);
      std::ostringstream os;
      os << "{\"n\":" << gv.n << ",\"d\":" << gv.dim() << ",\"S_d\":" << js(S)
         << ",\"e_int\":" << js(e_int) << ",\"T_ds\":[";
      for (int s = 1; s <= gv.dim(); ++s) {
        if (s > 1) os << ',';
        os << js(T_ds(ctx, s, std::span<const int>(gv.z.data(), s)));
      }
      os << ']';
      if (k.oracle_H > 0) {
        const OracleValue o = S_d_oracle(ctx, gv, k.oracle_H);
        os << ",\"oracle\":{\"H\":" << k.oracle_H << ",\"value\":" << js(o.value)
           << ",\"tail_bound\":" << js(o.tail_bound) << ",\"abs_diff\":" << js(std::abs(S - o.value))
           << '}';
      }
      os << "}\n";
      emit(os.str(), k.out);
    } else if (indexset->parsed()) {
      SpaceParams params = load_space(ix.alpha, 0, ix.weights);
      const IndexSet A = enumerate_index_set(params, ix.M, ix.budget);
      std::ostringstream os;
      write_index_dump(os, A, weight_model_hash(params.weights));
      emit(os.str(), ix.out);
    } else if (approx->parsed()) {
      VectorFileMetadata meta;
      const GeneratingVector gv = read_vector_file(a.vector, &meta);
      SpaceParams params = load_space(a.alpha, gv.dim(), a.weights);
      CriterionContext ctx(params, gv.n);
      const IndexSet A = enumerate_index_set(params, a.M);
      const std::string spec_text = load_config_text(a.function);
      const TestFunctionSpec spec = test_function_from_json(spec_text);
      const bool seed_in_spec = spec_text.find("\"seed\"") != std::string::npos;
      const MeasuredFunction m = measure_function(ctx, gv, A, spec, seed, seed_in_spec);
      const double S = S_d(ctx, gv);
      const double bound_value = two_term_bound(a.M, S);
      std::ostringstream coeffs;
      write_coefficients_csv(coeffs, m.coefficients);
      write_text_file(a.coefficients, coeffs.str());
      std::ostringstream os;
      os << "{\"n\":" << gv.n << ",\"d\":" << gv.dim() << ",\"M\":" << js(a.M)
         << ",\"l2_error\":" << js(m.l2_error) << ",\"bound\":" << js(bound_value)
         << ",\"coefficients_path\":\"" << a.coefficients << "\"}\n";
      emit(os.str(), a.out);
    } else if (bound->parsed()) {
      SpaceParams params = load_space(b.alpha, 0, b.weights);
      std::vector<double> grid;
      if (bound->count("--lambda") > 0) {
        grid = {b.lambda};
      } else if (!b.lambda_grid_arg.empty()) {
        grid = parse_lambda_list(b.lambda_grid_arg);
      } else {
        grid = lambda_grid(b.alpha);
      }
      const std::optional<double> M_opt =
          bound->count("--M") > 0 ? std::optional<double>(b.M) : std::nullopt;
      const std::optional<double> S_opt =
          bound->count("--S") > 0 ? std::optional<double>(b.S) : std::nullopt;
      const std::optional<double> xi_opt =
          bound->count("--xi") > 0 ? std::optional<double>(b.xi) : std::nullopt;
      const BoundScan scan = scan_bounds(params, b.n, grid, M_opt, S_opt, xi_opt);
      const ApproxErrorBound& best = scan.best;
      const double S_used = S_opt ? *S_opt : best.envelope;
      std::ostringstream os;
      os << "{\"n\":" << b.n << ",\"d\":" << params.d << ",\"lambda\":" << js(best.lambda)
         << ",\"M\":" << js(best.M) << ",\"S_d\":" << js(S_used) << ",\"bound\":" << js(best.two_term)
         << ",\"simplified\":" << js(best.simplified) << "}\n";
      emit(os.str(), b.out);
    } else if (sweep->parsed()) {
      SpaceParams params = load_space(sw.alpha, 0, sw.weights);
      const std::vector<int> ns = parse_int_list(sw.n_list);
      std::vector<TestFunctionSpec> specs;
      std::vector<bool> seed_in_spec;
      for (const std::string& arg : sw.functions) {
        const std::string text = load_config_text(arg);
        specs.push_back(test_function_from_json(text));
        seed_in_spec.push_back(text.find("\"seed\"") != std::string::npos);
      }
      std::ostringstream os;
      os << "n,S_d,bound,simplified";
      if (specs.size() == 1) {
        os << ",l2_error";
      } else {
        for (std::size_t i = 1; i <= specs.size(); ++i) os << ",l2_error_" << i;
      }
      os << '\n';
      for (int n : ns) {
        CriterionContext ctx(params, n);
        const CbcResult res = cbc_construct(ctx);
        const double S = S_d(ctx, res.rule);
        const BoundScan scan =
            scan_bounds(params, n, lambda_grid(params.alpha), std::nullopt, S, std::nullopt);
        os << n << ',' << js(S) << ',' << js(scan.best.two_term) << ','
           << js(scan.best.simplified);
        if (!specs.empty()) {
          const IndexSet A = enumerate_index_set(params, scan.best.M);
          for (std::size_t i = 0; i < specs.size(); ++i) {
            const MeasuredFunction m =
                measure_function(ctx, res.rule, A, specs[i], seed, seed_in_spec[i]);
            os << ',' << js(m.l2_error);
          }
        }
        os << '\n';
      }
      emit(os.str(), sw.out);
    }
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 5;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
