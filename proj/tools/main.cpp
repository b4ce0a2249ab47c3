#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ifs/boxcount.hpp"
#include "ifs/config.hpp"
#include "ifs/construct.hpp"
#include "ifs/csv.hpp"
#include "ifs/dimension.hpp"
#include "ifs/product.hpp"
#include "ifs/render.hpp"

namespace {

using namespace ifs;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfigError = 2;

// data goes to --out when given, stdout otherwise; summaries go to stderr
struct OutStream {
  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &std::cout;

  explicit OutStream(const std::string& path) {
    if (!path.empty()) {
      file = std::make_unique<std::ofstream>(path);
      if (!*file) throw ConfigError("cannot open output file: " + path);
      os = file.get();
    }
  }
  std::ostream& get() { return *os; }
};

std::string word_text(const Word& w, int alphabet_size) {
  std::string s;
  for (size_t i = 0; i < w.symbols.size(); ++i) {
    if (alphabet_size > 9 && i) s += '.';
    s += std::to_string(w.symbols[i]);
  }
  return s;
}

std::vector<double> boxdim_scales(const SystemSpec& spec, double resolution,
                                  int depth) {
  const double diam = spec.ambient.diameter();
  std::vector<double> deltas;
  double delta = diam / 4.0;
  for (int i = 0; i < depth && delta >= 2.0 * resolution; ++i, delta /= 2.0) {
    deltas.push_back(delta);
  }
  if (deltas.size() < 4) {
    throw ConfigError(
        "fewer than 4 usable scales: lower --resolution or raise --depth");
  }
  return deltas;
}

int cmd_dim(const std::string& config, int kmax, double tol,
            const std::string& out) {
  const SystemSpec spec = parse_config(config);
  const RatioVector ratios = spec.ratio_vector();
  const MoranSequence seq = dim_limit(spec.codespace, ratios, kmax, tol);
  const auto taus = tau(spec.codespace, ratios, seq.s_estimate, kmax);
  const SpectralResult oracle = spectral_dim(spec.codespace, ratios, 1e-9);
  const DimensionReport rep =
      dimension_report(seq.s_estimate, spec.condensation, 0.0, seq.s_estimate,
                       spec.osc_asserted);

  OutStream stream(out);
  CsvWriter csv(stream.get(), {"k", "s_k", "tau_k"});
  for (size_t i = 0; i < seq.s_values.size(); ++i) {
    csv.row({cell(seq.s_values[i].first), cell(seq.s_values[i].second),
             cell(taus[i].second)});
  }
  csv.row({"limit", cell(seq.s_estimate), cell(taus.back().second)});

  std::cerr << "s_estimate = " << format_number(seq.s_estimate)
            << (seq.converged ? " (converged)" : " (not converged)") << "\n"
            << "spectral_dim = " << format_number(oracle.s)
            << (oracle.irreducible ? "" : "  [warning: reducible transition graph]")
            << "\n"
            << "hausdorff = " << format_number(rep.hausdorff) << "\n"
            << "box bounds = [" << format_number(rep.box_lower_bound) << ", "
            << format_number(rep.box_upper_bound) << "]\n";
  if (rep.box_exact) {
    std::cerr << "box dimension = " << format_number(*rep.box_exact) << "\n";
  }
  if (rep.upper_bounds_only) {
    std::cerr << "note: open set condition not asserted; dimensions are upper "
                 "bounds\n";
  }
  return kExitOk;
}

int cmd_boxdim(const std::string& config, double resolution, int depth,
               const std::string& out) {
  const SystemSpec spec = parse_config(config);
  const PointCloud cloud = inhomogeneous_cloud(spec, resolution);
  const auto deltas = boxdim_scales(spec, resolution, depth);
  const BoxCountScan scan = fit_dimension(cloud, deltas, spec.ambient.lo);

  OutStream stream(out);
  CsvWriter csv(stream.get(), {"delta", "count"});
  for (const auto& [delta, count] : scan.rows) {
    csv.row({cell(delta), cell(count)});
  }
  std::cerr << "cloud points = " << cloud.points.size() << "\n"
            << "fitted_slope = " << format_number(scan.fitted_slope) << "\n"
            << "max_residual = " << format_number(scan.max_residual) << "\n";
  return kExitOk;
}

int cmd_construct(const std::string& config, double resolution,
                  const std::string& out, const std::string& render,
                  int width, int height) {
  const SystemSpec spec = parse_config(config);
  const PointCloud cloud = inhomogeneous_cloud(spec, resolution);

  std::vector<std::string> header;
  for (int i = 0; i < spec.dim(); ++i) header.push_back("x" + std::to_string(i));
  OutStream stream(out);
  CsvWriter csv(stream.get(), header);
  std::vector<std::string> cells(static_cast<size_t>(spec.dim()));
  for (const auto& p : cloud.points) {
    for (int i = 0; i < spec.dim(); ++i) cells[static_cast<size_t>(i)] = cell(p[i]);
    csv.row(cells);
  }
  std::cerr << "cloud points = " << cloud.points.size()
            << ", resolution = " << format_number(cloud.resolution) << "\n";
  if (!render.empty()) {
    write_pgm(render_raster(cloud, width, height, spec.ambient), render);
    std::cerr << "render written to " << render << "\n";
  }
  return kExitOk;
}

int cmd_verify(const std::string& config, double resolution) {
  const SystemSpec spec = parse_config(config);
  const auto closure_check = validate_shift_closed(spec.codespace);
  std::cout << "shift_closed: " << (closure_check.ok ? "ok" : "violated")
            << "\n";

  const PointCloud cloud = inhomogeneous_cloud(spec, resolution);
  const VerificationReport inclusion =
      verify_inclusion(cloud, spec, 2.0 * resolution);
  std::cout << "inclusion: " << (inclusion.passed ? "pass" : "FAIL")
            << "  worst_gap = " << format_number(inclusion.worst_gap)
            << "  tol = " << format_number(inclusion.tolerance) << "\n";

  bool closure_pass = true;
  if (!spec.condensation.is_empty) {
    const PointCloud e = subshift_cloud(spec, resolution);
    const PointCloud o = orbit_cloud(spec, resolution);
    closure_pass = verify_closure(e, o, 3.0 * resolution);
    std::cout << "closure: " << (closure_pass ? "pass" : "FAIL")
              << "  tol = " << format_number(3.0 * resolution) << "\n";
  } else {
    std::cout << "closure: skipped (no condensation set)\n";
  }
  return closure_check.ok && inclusion.passed && closure_pass
             ? kExitOk
             : kExitVerifyFailed;
}

int cmd_stopping(const std::string& config, double delta,
                 const std::string& out) {
  const SystemSpec spec = parse_config(config);
  const auto words = stopping_set(spec.codespace, spec.ratio_vector(), delta);
  OutStream stream(out);
  CsvWriter csv(stream.get(), {"word", "ratio"});
  const RatioVector ratios = spec.ratio_vector();
  for (const auto& w : words) {
    csv.row({word_text(w, spec.codespace.alphabet_size()),
             cell(word_ratio(ratios, w))});
  }
  std::cerr << "stopping words = " << words.size() << "\n";
  return kExitOk;
}

int cmd_chaos(const std::string& config, int samples, int burn, uint64_t seed,
              const std::string& out) {
  const SystemSpec spec = parse_config(config);
  const MeasureSample sample = chaos_game(spec, samples, burn, seed);

  std::vector<std::string> header;
  for (int i = 0; i < spec.dim(); ++i) header.push_back("x" + std::to_string(i));
  header.push_back("step");
  OutStream stream(out);
  CsvWriter csv(stream.get(), header);
  std::vector<std::string> cells(header.size());
  for (size_t k = 0; k < sample.points.size(); ++k) {
    for (int i = 0; i < spec.dim(); ++i) {
      cells[static_cast<size_t>(i)] = cell(sample.points[k][i]);
    }
    cells.back() = cell(static_cast<long>(k));
    csv.row(cells);
  }

  for (int i = 0; i < spec.dim(); ++i) {
    double mean = 0.0, sq = 0.0;
    for (const auto& p : sample.points) {
      mean += p[i];
      sq += p[i] * p[i];
    }
    mean /= static_cast<double>(sample.n);
    sq /= static_cast<double>(sample.n);
    std::cerr << "x" << i << ": mean = " << format_number(mean)
              << ", variance = " << format_number(sq - mean * mean) << "\n";
  }
  return kExitOk;
}

int cmd_product(const std::string& config, const std::string& config2,
                const std::string& out, const std::string& check,
                const std::string& iosc_variant, double resolution,
                int moments, int samples, uint64_t seed) {
  const SystemSpec a = parse_config(config);
  const SystemSpec b = parse_config(config2);
  const ProductSpec p = product_system(a, b);
  std::cerr << "combined maps = " << p.combined.map_count()
            << ", condensation weight = "
            << format_number(p.condensation_weight) << "\n";
  if (!out.empty()) {
    emit_config(p.combined, out);
    std::cerr << "combined config written to " << out << "\n";
  }

  bool ok = true;
  if (check == "issc") {
    const SeparationReport rep = check_issc(p.combined, resolution, 0.0);
    std::cout << "issc: " << (rep.passed ? "pass" : "FAIL")
              << "  min_image_gap = " << format_number(rep.min_image_gap)
              << "  min_condensation_gap = "
              << format_number(rep.min_condensation_gap) << "\n";
    ok &= rep.passed;
  } else if (check == "iosc") {
    const OscVariant variant = iosc_variant == "paper"
                                   ? OscVariant::AsStated
                                   : OscVariant::Conventional;
    const OpenSetReport rep = check_iosc(p.combined, p.combined.ambient, variant);
    std::cout << "iosc(" << iosc_variant << "): "
              << (rep.passed ? "pass" : "FAIL")
              << "  invariance = " << rep.invariance
              << "  disjoint = " << rep.images_disjoint
              << "  condensation_clause = " << rep.condensation_clause
              << "  margin = " << format_number(rep.margin) << "\n";
    ok &= rep.passed;
  } else if (!check.empty()) {
    throw ConfigError("--check must be 'issc' or 'iosc'");
  }

  if (moments > 0) {
    const MeasureComparison cmp = product_measure_check(p, samples, seed, moments);
    std::cout << "weight_sum_error = " << format_number(cmp.weight_sum_error)
              << "\n";
    for (const auto& row : cmp.rows) {
      std::cout << "moment " << row.name << ": " << (row.pass ? "pass" : "FAIL")
                << "  independent = " << format_number(row.mean_independent)
                << "  decomposed = " << format_number(row.mean_decomposed)
                << "  diff = " << format_number(row.diff)
                << "  se = " << format_number(row.stderr_combined) << "\n";
    }
    ok &= cmp.passed && cmp.weight_sum_error <= 1e-12;
  }
  return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_continuity(const std::string& config, int kmax,
                   const std::string& out) {
  const SystemSpec spec = parse_config(config);
  const ContinuityReport rep = continuity_report(spec, kmax);
  OutStream stream(out);
  CsvWriter csv(stream.get(), {"k", "s_k", "dim_f_k"});
  for (const auto& row : rep.rows) {
    csv.row({cell(row.k), cell(row.s_k), cell(row.dim_f_k)});
  }
  csv.row({"limit", cell(rep.limit_s), cell(rep.limit_dim)});
  std::cerr << "limit s = " << format_number(rep.limit_s)
            << ", limit dim = " << format_number(rep.limit_dim) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inhomogeneous iterated-function-system toolbox"};
  app.require_subcommand(1);

  std::string config, config2, out, render, check, iosc_variant = "conventional";
  int kmax = 12, depth = 6, width = 512, height = 512, moments = 0;
  int samples = 1000000, burn = 1024;
  double tol = 1e-9, delta = 0.1, resolution = 1e-3;
  uint64_t seed = 1;

  auto* dim = app.add_subcommand("dim", "Moran sequence and dimension report");
  dim->add_option("--config", config)->required();
  dim->add_option("--kmax", kmax);
  dim->add_option("--tol", tol);
  dim->add_option("--out", out);

  auto* boxdim = app.add_subcommand("boxdim", "box-count slope of the built set");
  boxdim->add_option("--config", config)->required();
  boxdim->add_option("--resolution", resolution);
  boxdim->add_option("--depth", depth);
  boxdim->add_option("--out", out);

  auto* construct = app.add_subcommand("construct", "build the set as a cloud");
  construct->add_option("--config", config)->required();
  construct->add_option("--resolution", resolution);
  construct->add_option("--out", out);
  construct->add_option("--render", render);
  construct->add_option("--width", width);
  construct->add_option("--height", height);

  auto* verify = app.add_subcommand("verify", "inclusion and closure checks");
  verify->add_option("--config", config)->required();
  verify->add_option("--resolution", resolution);

  auto* stopping = app.add_subcommand("stopping", "delta-stopping word list");
  stopping->add_option("--config", config)->required();
  stopping->add_option("--delta", delta);
  stopping->add_option("--out", out);

  auto* chaos = app.add_subcommand("chaos", "chaos-game measure sample");
  chaos->add_option("--config", config)->required();
  chaos->add_option("--samples", samples);
  chaos->add_option("--burn", burn);
  chaos->add_option("--seed", seed);
  chaos->add_option("--out", out);

  auto* product = app.add_subcommand("product", "combine two systems");
  product->add_option("--config", config)->required();
  product->add_option("--config2", config2)->required();
  product->add_option("--out", out);
  product->add_option("--check", check);
  product->add_option("--iosc-variant", iosc_variant)
      ->check(CLI::IsMember({"paper", "conventional"}));
  product->add_option("--resolution", resolution);
  product->add_option("--moments", moments);
  product->add_option("--samples", samples);
  product->add_option("--seed", seed);

  auto* continuity = app.add_subcommand("continuity", "per-level dimension table");
  continuity->add_option("--config", config)->required();
  continuity->add_option("--kmax", kmax);
  continuity->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (app.got_subcommand(dim)) return cmd_dim(config, kmax, tol, out);
    if (app.got_subcommand(boxdim)) {
      return cmd_boxdim(config, resolution, depth, out);
    }
    if (app.got_subcommand(construct)) {
      return cmd_construct(config, resolution, out, render, width, height);
    }
    if (app.got_subcommand(verify)) return cmd_verify(config, resolution);
    if (app.got_subcommand(stopping)) return cmd_stopping(config, delta, out);
    if (app.got_subcommand(chaos)) {
      return cmd_chaos(config, samples, burn, seed, out);
    }
    if (app.got_subcommand(product)) {
      return cmd_product(config, config2, out, check, iosc_variant, resolution,
                         moments, samples, seed);
    }
    if (app.got_subcommand(continuity)) {
      return cmd_continuity(config, kmax, out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
