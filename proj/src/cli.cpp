#include "lorentz/cli.hpp"

#include <ostream>
#include <stdexcept>

#include "CLI11.hpp"

#include "lorentz/errors.hpp"
#include "lorentz/fixtures.hpp"
#include "lorentz/rearrangement.hpp"
#include "lorentz/verify.hpp"

namespace lorentz::cli {

namespace {

struct Flags {
  std::string weights, seq, x, basis, matrix;
  std::optional<double> p;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::optional<std::size_t> trials, truncation, n, m;
  std::string kind, space = "gamma", suite = "all", name, ties = "lowest";
  std::optional<std::string> eps;
};

/// A verification failure: exits 4 with `doc` as the error payload.
struct Failed {
  json doc;
};

WeightSpec load_weights(const Flags &f) {
  if (f.weights.empty())
    throw CLI::ValidationError("--weights", "required");
  const auto names = fixtures::names();
  if (std::find(names.begin(), names.end(), f.weights) != names.end())
    return fixtures::by_name(f.weights, f.p.value_or(1.0));
  return weights_from_json(load_json_argument(f.weights), f.p);
}

Sequence load_sequence(const std::string &arg, const char *flag) {
  if (arg.empty())
    throw CLI::ValidationError(flag, "required");
  return sequence_from_json(load_json_argument(arg));
}

std::vector<Vector> load_basis(const std::string &arg) {
  if (arg.empty())
    throw CLI::ValidationError("--basis", "required");
  return matrix_from_json(load_json_argument(arg));
}

json cmd_norm(const Flags &f) {
  const WeightSpec w = load_weights(f);
  const Sequence x = load_sequence(f.seq, "--seq");
  if (f.space == "mpsi" || f.space == "mphi") {
    const SupResult s = f.space == "mpsi" ? norm_m_psi(w, x) : norm_m_phi(w, x);
    return to_json(s);
  }
  CertifiedValue v;
  if (f.space == "gamma")
    v = norm_gamma(w, x);
  else if (f.space == "d1")
    v = norm_d1(w, x);
  else if (f.space == "d1v")
    v = norm_d1_derived(w, x);
  else
    throw CLI::ValidationError("--space", "expected gamma, d1, d1v, mpsi or mphi");
  json out = to_json(v);
  out["attained_at"] = nullptr;
  return out;
}

json cmd_rearrange(const Flags &f) {
  const Sequence xs = rearrangement(load_sequence(f.seq, "--seq"));
  return to_json(f.truncation ? xs.materialized(*f.truncation) : xs);
}

json cmd_phi(const Flags &f) {
  const WeightSpec w = load_weights(f);
  const std::size_t n = f.n.value_or(f.truncation.value_or(10));
  json rows = json::array();
  for (std::size_t k = 1; k <= n; ++k)
    rows.push_back(json{{"n", k},
                        {"W", to_json(W(w, k))},
                        {"phi", to_json(phi(w, k))},
                        {"psi", to_json(psi(w, k))},
                        {"v", to_json(derived_v(w, k))}});
  return json{{"weights", to_json(w)}, {"table", rows}};
}

json cmd_classify(const Flags &f) {
  const WeightSpec w = load_weights(f);
  const Sequence x = load_sequence(f.seq, "--seq");
  if (f.kind == "extreme")
    return to_json(classify_extreme_gamma1(w, x));
  if (f.kind == "extreme-dual")
    return to_json(classify_extreme_dual(w, x));
  if (f.kind == "smooth")
    return to_json(classify_smooth_gamma1(w, x));
  if (f.kind == "smooth-predual")
    return to_json(classify_smooth_predual(w, x));
  if (f.kind == "smooth-dual")
    return to_json(classify_smooth_dual(w, x));
  throw CLI::ValidationError("--kind", "expected extreme, extreme-dual, smooth, smooth-predual or smooth-dual");
}

json cmd_norming(const Flags &f) {
  const WeightSpec w = load_weights(f);
  const Sequence x = load_sequence(f.seq, "--seq");
  if (f.space == "mpsi")
    return to_json(norming_element(w, x, f.m));
  if (f.space != "gamma")
    throw CLI::ValidationError("--space", "expected gamma or mpsi");
  const TieBreak ties = f.ties == "highest" ? TieBreak::highest_index_first : TieBreak::lowest_index_first;
  const Sequence y = norming_functional(w, x, ties);
  return json{{"functional", to_json(y)}, {"pairing", to_json(pairing(x, y))}, {"norm", to_json(norm_gamma(w, x))}};
}

json cmd_counterexample(const Flags &f) {
  const WeightSpec w = load_weights(f);
  std::optional<Scalar> eps;
  if (f.eps)
    eps = scalar_from_json(load_json_argument(*f.eps));
  const CounterexampleBundle b = counterexample(counterexample_kind(f.kind), w, eps);
  const json doc = to_json(b);
  if (!b.verified)
    throw Failed{doc};
  return doc;
}

json cmd_project(const Flags &f) {
  const WeightSpec w = load_weights(f);
  if (f.x.empty())
    throw CLI::ValidationError("--x", "required");
  const Vector x = vector_from_json(load_json_argument(f.x));
  return to_json(metric_projection(w, x, load_basis(f.basis), f.tol, f.seed));
}

json cmd_opnorm(const Flags &f) {
  const WeightSpec w = load_weights(f);
  if (f.matrix.empty())
    throw CLI::ValidationError("--matrix", "required");
  const Matrix p = matrix_from_json(load_json_argument(f.matrix));
  const std::size_t n = f.n.value_or(p.size());
  json out = to_json(operator_norm_via_extremes(w, n, p));
  if (!f.basis.empty())
    out["norm_one_projection"] = to_json(is_norm_one_projection(w, n, p, load_basis(f.basis)));
  return out;
}

json cmd_verify(const Flags &f) {
  VerifyOptions opts;
  opts.seed = f.seed;
  opts.trials = f.trials;
  const json doc = run_suite(f.suite, opts);
  if (!doc.at("pass").get<bool>())
    throw Failed{doc};
  return doc;
}

json cmd_fixtures(const Flags &f) {
  if (!f.name.empty())
    return to_json(fixtures::by_name(f.name, f.p.value_or(1.0)));
  json out = json::object();
  for (const auto &n : fixtures::names())
    out[n] = to_json(fixtures::by_name(n, f.p.value_or(1.0)));
  out["suites"] = battery_labels();
  return out;
}

json error_doc(const std::string &kind, const std::string &message) {
  return json{{"error", kind}, {"message", message}};
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out) {
  CLI::App app{"Lorentz and Marcinkiewicz sequence space toolkit"};
  app.require_subcommand(1);
  Flags f;

  auto weights = [&](CLI::App *s) {
    s->add_option("--weights", f.weights, "weight JSON (file or inline) or a fixture name");
    s->add_option("--p", f.p, "exponent p >= 1");
  };
  auto seq = [&](CLI::App *s) { s->add_option("--seq", f.seq, "sequence JSON (file or inline)"); };

  auto *norm = app.add_subcommand("norm", "norm of a sequence");
  weights(norm);
  seq(norm);
  norm->add_option("--space", f.space, "gamma | d1 | d1v | mpsi | mphi");

  auto *rearrange = app.add_subcommand("rearrange", "decreasing rearrangement");
  seq(rearrange);
  rearrange->add_option("--truncation", f.truncation, "materialize this many terms");

  auto *ph = app.add_subcommand("phi", "W, phi, psi and v for n = 1..N");
  weights(ph);
  ph->add_option("--n", f.n);
  ph->add_option("--truncation", f.truncation);

  auto *reg = app.add_subcommand("regime", "regime flags of a weight");
  weights(reg);

  auto *classify = app.add_subcommand("classify", "extreme and smooth point classifiers");
  weights(classify);
  seq(classify);
  classify->add_option("--kind", f.kind)->required();

  auto *norming = app.add_subcommand("norming", "norming functional (gamma) or norming element (mpsi)");
  weights(norming);
  seq(norming);
  norming->add_option("--space", f.space, "gamma | mpsi");
  norming->add_option("--m", f.m, "approximant index");
  norming->add_option("--ties", f.ties, "lowest | highest");

  auto *cex = app.add_subcommand("counterexample", "counterexample bundle");
  weights(cex);
  cex->add_option("--kind", f.kind)->required();
  cex->add_option("--eps", f.eps);

  auto *project = app.add_subcommand("project", "metric projection onto span(basis)");
  weights(project);
  project->add_option("--x", f.x);
  project->add_option("--basis", f.basis);
  project->add_option("--tol", f.tol);
  project->add_option("--seed", f.seed);

  auto *opnorm = app.add_subcommand("opnorm", "operator norm on gamma_{1,w}^N");
  weights(opnorm);
  opnorm->add_option("--matrix", f.matrix);
  opnorm->add_option("--n", f.n);
  opnorm->add_option("--basis", f.basis, "also test for a norm-one projection onto span(basis)");

  auto *verify = app.add_subcommand("verify", "property batteries");
  verify->add_option("--suite", f.suite);
  verify->add_option("--seed", f.seed);
  verify->add_option("--trials", f.trials);

  auto *fx = app.add_subcommand("fixtures", "weight fixtures and suite labels");
  fx->add_option("--name", f.name);
  fx->add_option("--p", f.p);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    out << json{{"help", app.help()}}.dump() << '\n';
    return ExitCode::ok;
  } catch (const CLI::ParseError &e) {
    out << error_doc("usage", e.what()).dump() << '\n';
    return ExitCode::usage;
  }

  try {
    json doc;
    if (*norm)
      doc = cmd_norm(f);
    else if (*rearrange)
      doc = cmd_rearrange(f);
    else if (*ph)
      doc = cmd_phi(f);
    else if (*reg)
      doc = to_json(regime(load_weights(f)));
    else if (*classify)
      doc = cmd_classify(f);
    else if (*norming)
      doc = cmd_norming(f);
    else if (*cex)
      doc = cmd_counterexample(f);
    else if (*project)
      doc = cmd_project(f);
    else if (*opnorm)
      doc = cmd_opnorm(f);
    else if (*verify)
      doc = cmd_verify(f);
    else
      doc = cmd_fixtures(f);
    out << doc.dump() << '\n';
    return ExitCode::ok;
  } catch (const Failed &e) {
    json doc = error_doc("verification", "verification failed");
    doc["witness"] = e.doc;
    out << doc.dump() << '\n';
    return ExitCode::verification_failed;
  } catch (const RegimeError &e) {
    out << error_doc("regime", e.what()).dump() << '\n';
    return ExitCode::regime_violation;
  } catch (const CLI::Error &e) {
    out << error_doc("usage", std::string(e.get_name()) + ": " + e.what()).dump() << '\n';
    return ExitCode::usage;
  } catch (const std::invalid_argument &e) {
    out << error_doc("usage", e.what()).dump() << '\n';
    return ExitCode::usage;
  } catch (const std::domain_error &e) {
    out << error_doc("domain", e.what()).dump() << '\n';
    return ExitCode::usage;
  } catch (const std::exception &e) {
    out << error_doc("internal", e.what()).dump() << '\n';
    return 1;
  }
}

int run(int argc, char **argv, std::ostream &out) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out);
}

} // namespace lorentz::cli
