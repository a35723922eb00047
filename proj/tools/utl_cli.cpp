#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "utl/algebra.hpp"
#include "utl/projectors.hpp"
#include "utl/reps.hpp"
#include "utl/verify.hpp"

using namespace utl;
using nlohmann::json;

namespace {

struct Options {
  std::string algebra = "uatl";
  int n = 3;
  std::optional<int> d, r, k2;
  std::optional<std::string> z, q_half, alpha, gamma, gamma_root;
  std::uint64_t seed = 7;
  std::string method = "solver";
  std::string element = "all";
  std::string format = "json";
  bool verify = false, oracle = false, enumerate = false, perturb = false;
  int max_n = 0;
};

enum Exit { kOk = 0, kVerification = 1, kNonGeneric = 2, kInvalid = 3 };

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

Variant variant_of(const Options& o) { return Variant(parse_kind(o.algebra), o.n); }

/// Sampled point overridden by any explicit parameter flags.
template <class F>
ParamEnv<F> make_env(const Options& o, Variant v) {
  int r = o.r.value_or(-1);
  if (o.gamma_root && is_affine_uncoiled(v.kind) && r < 0) r = 0;
  ParamEnv<F> env = sample_env<F>(o.seed, v, r);
  auto rat = [](const std::string& s) { return from_rational<F>(parse_rational(s)); };
  if (o.q_half) env.s = rat(*o.q_half);
  if (o.alpha) env.alpha = rat(*o.alpha);
  if (o.z) env.z = rat(*o.z);
  if (o.gamma) env.gamma = rat(*o.gamma);
  if (o.gamma_root) {
    if (!is_affine_uncoiled(v.kind)) throw InvalidInput("--gamma-root applies to affine kinds only");
    env.omega = rat(*o.gamma_root);
    F g = power(env.omega, v.n);
    if (o.gamma && !scalar_equal(env.gamma, g)) throw InvalidInput("--gamma disagrees with --gamma-root^n");
    env.gamma = g;
  }
  return env;
}

/// Affine sectors whose omega is irrational run over the cyclotomic field.
bool needs_cyclotomic(const Options& o, Variant v) {
  if (!is_affine_uncoiled(v.kind) || o.gamma_root || !o.r) return false;
  int r = *o.r;
  if (r < 0 || r >= v.n) throw InvalidInput("--r must lie in [0, n)");
  return !(r == 0 || 2 * r == v.n);
}

template <class F>
json table_diff(const GammaTable<F>& a, const GammaTable<F>& b) {
  json rows = json::array();
  std::map<std::pair<int, int>, bool> keys;
  for (const auto& kv : a.entries) keys[kv.first] = true;
  for (const auto& kv : b.entries) keys[kv.first] = true;
  for (const auto& [key, unused] : keys) {
    F d = a.get(key.first, key.second) - b.get(key.first, key.second);
    rows.push_back({{"k", key.first}, {"l2", key.second}, {"diff", ScalarTraits<F>::to_json(d)}});
  }
  return rows;
}

template <class F>
int run_gamma(const Options& o, Variant v) {
  ParamEnv<F> env = make_env<F>(o, v);
  json out{{"env", env_to_json(env)}, {"method", o.method}};
  bool ok = true;
  auto with_residual = [&](const GammaTable<F>& t) {
    json j = t.to_json();
    double res = max_residual(gamma_residuals(t, env));
    j["max_residual"] = res;
    ok = ok && res == 0;
    return j;
  };
  if (o.method == "solver") {
    auto t = gamma_solve(v, env);
    if (o.perturb) detail::perturb(t);
    out["table"] = with_residual(t);
  } else if (o.method == "conjecture") {
    out["table"] = with_residual(gamma_closed_form(v, env));
  } else if (o.method == "both") {
    auto s = gamma_solve(v, env);
    if (o.perturb) detail::perturb(s);
    auto c = gamma_closed_form(v, env);
    out["solver"] = with_residual(s);
    out["conjecture"] = with_residual(c);
    out["diff"] = table_diff(s, c);
    bool same = gamma_distance(s, c) == 0;
    out["match"] = same;
    ok = ok && same;
  } else {
    throw InvalidInput("--method must be solver, conjecture or both");
  }
  emit(out);
  return ok ? kOk : kVerification;
}

template <class F>
int run_projector(const Options& o, Variant v) {
  ParamEnv<F> env = make_env<F>(o, v);
  Algebra<F> A(v, env);
  GammaTable<F> t = o.method == "conjecture" ? gamma_closed_form(v, env) : gamma_solve(v, env);
  if (o.perturb) detail::perturb(t);
  Element<F> Q = build_projector_Q(A, t);
  json out{{"env", env_to_json(env)}, {"table", t.to_json()}, {"terms", Q.size()}};
  bool ok = true;
  if (o.verify) {
    json ver;
    double res = max_residual(gamma_residuals(t, env));
    ver["max_residual"] = res;
    ver["annihilated"] = detail::annihilated(A, Q);
    ver["idempotent"] = equal(A.mul(Q, Q), Q);
    ok = res == 0 && ver["annihilated"].get<bool>() && ver["idempotent"].get<bool>();
    out["verification"] = ver;
  }
  if (o.oracle) {
    std::size_t rank = 0, dim = 0;
    Element<F> X = projector_oracle(A, &rank, &dim);
    bool same = equal(X, Q);
    out["oracle"] = {{"rank", rank}, {"dimension", dim}, {"match", same}};
    ok = ok && same;
  }
  if (o.format == "art") {
    for (const auto& [D, c] : Q.sorted()) {
      std::cout << ScalarTraits<F>::to_json(c).dump() << "\n" << diagram_art(D) << "\n";
    }
  } else {
    out["projector"] = element_to_json(Q);
    emit(out);
  }
  return ok ? kOk : kVerification;
}

int run_dims(const Options& o) {
  Variant v = variant_of(o);
  json out{{"algebra", std::string(kind_name(v.kind))}, {"n", v.n}};
  mpz_class closed = dimension_closed_form(v);
  out["closed_form"] = closed.get_str();
  bool ok = true;
  if (o.enumerate) {
    std::size_t e = basis_enumerate(v).size();
    out["enumerated"] = e;
    ok = closed == mpz_class(long(e));
    out["match"] = ok;
  }
  emit(out);
  return ok ? kOk : kVerification;
}

int run_basis(const Options& o) {
  Variant v = variant_of(o);
  std::vector<Diagram> B = basis_enumerate(v);
  if (o.d) {
    std::vector<Diagram> keep;
    for (const auto& D : B)
      if (D.d == *o.d) keep.push_back(D);
    B.swap(keep);
  }
  if (o.format == "art") {
    for (const auto& D : B) std::cout << diagram_art(D) << "\n";
    return kOk;
  }
  json rows = json::array();
  for (const auto& D : B) rows.push_back(diagram_to_json(D));
  emit({{"algebra", std::string(kind_name(v.kind))}, {"n", v.n}, {"size", B.size()}, {"basis", rows}});
  return kOk;
}

int run_central(const Options& o) {
  Variant v(Kind::aTL, o.n);
  ParamEnv<Rational> env = make_env<Rational>(o, v);
  Algebra<Rational> A(v, env);
  std::vector<Central> which;
  if (o.element == "all")
    which = {Central::F, Central::Fbar, Central::OmegaN, Central::OmegaMinusN};
  else
    which = {parse_central(o.element)};
  std::vector<int> ds;
  if (o.d) {
    if (*o.d < 0 || *o.d > o.n || (o.n - *o.d) % 2) throw InvalidInput("--d must satisfy 0 <= d <= n, d = n mod 2");
    ds.push_back(*o.d);
  } else {
    for (int d = o.n % 2; d <= o.n; d += 2) ds.push_back(d);
  }
  bool ok = true;
  json rows = json::array();
  for (Central c : which) {
    int k2 = o.k2.value_or(0);
    Element<Rational> el = build_central(A, c, k2);
    for (int d : ds) {
      StandardModule<Rational> W(o.n, d, env.z, env);
      Rational ev = central_eigenvalue(c, W, env, k2);
      bool match = matrix_of(el, W) == ev * Matrix<Rational>::identity(W.dim());
      ok = ok && match;
      rows.push_back({{"element", central_name(c)}, {"module", W.descriptor()}, {"eigenvalue", rational_string(ev)},
                      {"match", match}});
    }
  }
  emit({{"env", env_to_json(env)}, {"results", rows}});
  return ok ? kOk : kVerification;
}

int run_selfcheck(const Options& o) {
  VerifyConfig cfg;
  cfg.max_n = o.max_n;
  cfg.seed = o.seed;
  cfg.inject_gamma_fault = o.perturb;
  bool all = true;
  json rows = json::array();
  for (const auto& r : run_acceptance(cfg)) {
    all = all && r.pass;
    rows.push_back({{"criterion", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  }
  emit({{"max_n", o.max_n}, {"seed", o.seed}, {"pass", all}, {"criteria", rows}});
  return all ? kOk : kVerification;
}

void add_params(CLI::App* c, Options& o) {
  c->add_option("--algebra", o.algebra, "uatl, uptl, uatl1, uptl1, uatl2, uptl2, tl, atl, ptl");
  c->add_option("--n", o.n, "number of nodes")->check(CLI::Range(1, 32));
  c->add_option("--r", o.r, "sector label of the affine kinds");
  c->add_option("--z", o.z, "module twist");
  c->add_option("--q-half", o.q_half, "s with q = s^2");
  c->add_option("--alpha", o.alpha, "non-contractible loop weight");
  c->add_option("--gamma", o.gamma, "unwinding scalar");
  c->add_option("--gamma-root", o.gamma_root, "omega with omega^n = gamma");
  c->add_option("--seed", o.seed, "sampling seed for omitted parameters");
  c->add_option("--format", o.format, "json or art")->check(CLI::IsMember({"json", "art"}));
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"uncoiled Temperley-Lieb projectors"};
  app.require_subcommand(1);

  auto* dims = app.add_subcommand("dims", "closed-form dimension, optionally against enumeration");
  add_params(dims, o);
  dims->add_flag("--enumerate", o.enumerate, "enumerate the sandwich basis");

  auto* basis = app.add_subcommand("basis", "sandwich basis");
  add_params(basis, o);
  basis->add_option("--d", o.d, "keep one sector");

  auto* gamma = app.add_subcommand("gamma", "Gamma tables");
  add_params(gamma, o);
  gamma->add_option("--method", o.method, "solver, conjecture or both");
  gamma->add_flag("--perturb-gamma", o.perturb, "perturb one solved entry")->group("");

  auto* proj = app.add_subcommand("projector", "build the projector");
  add_params(proj, o);
  proj->add_option("--method", o.method, "solver or conjecture");
  proj->add_flag("--verify", o.verify, "check annihilation and idempotency");
  proj->add_flag("--oracle", o.oracle, "compare with the annihilator nullspace");
  proj->add_flag("--perturb-gamma", o.perturb, "perturb one solved entry")->group("");

  auto* central = app.add_subcommand("central", "eigenvalues of central elements on standard modules");
  add_params(central, o);
  central->add_option("--d", o.d, "single sector");
  central->add_option("--element", o.element, "F, Fbar, G, H, OmegaN, OmegaMinusN or all");
  central->add_option("--k2", o.k2, "index of H");

  auto* self = app.add_subcommand("selfcheck", "acceptance suite");
  self->add_option("--max-n", o.max_n, "cap every size range");
  self->add_option("--seed", o.seed, "base sample seed");
  self->add_flag("--perturb-gamma", o.perturb, "perturb one solved entry")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  auto fail = [](int code, const std::string& kind, const std::string& what) {
    std::cerr << json{{"error", kind}, {"message", what}}.dump() << "\n";
    return code;
  };
  try {
    if (*dims) return run_dims(o);
    if (*basis) return run_basis(o);
    if (*central) return run_central(o);
    if (*self) return run_selfcheck(o);
    Variant v = variant_of(o);
    require_projector_variant(v);
    bool cyc = needs_cyclotomic(o, v);
    if (*gamma) return cyc ? run_gamma<Cyclo>(o, v) : run_gamma<Rational>(o, v);
    if (*proj) return cyc ? run_projector<Cyclo>(o, v) : run_projector<Rational>(o, v);
  } catch (const VerificationFailure& e) {
    return fail(kVerification, "verification", e.what());
  } catch (const NonGenericError& e) {
    return fail(kNonGeneric, "non-generic", e.what());
  } catch (const InvalidInput& e) {
    return fail(kInvalid, "invalid-input", e.what());
  } catch (const ResourceError& e) {
    return fail(kInvalid, "resource", e.what());
  }
  return kInvalid;
}
