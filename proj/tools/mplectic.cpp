// mplectic: command-line front end. Every run prints a report; exit status is
// 0 on verified success, 1 on a negative or inconclusive answer, 2 on bad input.

#include "mplectic/moser.hpp"
#include "mplectic/report.hpp"
#include "mplectic/standard.hpp"
#include "mplectic/syntax.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace mplectic;

namespace {

constexpr int kSuccess = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;

struct Options {
  std::string form;
  std::string file;
  std::optional<int> n;
  std::optional<int> k;
  std::string scalar = "exact";
  std::string format = "text";
  std::string subspace;
  std::optional<int> j;
  std::string hints;
  std::optional<unsigned> seed;
  std::string split;
  std::string complement;
  std::optional<double> box;
  std::optional<double> step;
  std::string samples;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read file '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string form_text(const Options& o) {
  if (!o.form.empty() && !o.file.empty()) throw std::invalid_argument("give the form inline or with --file, not both");
  if (!o.file.empty()) return read_file(o.file);
  if (o.form.empty()) throw std::invalid_argument("missing form (positional argument or --file)");
  return o.form;
}

int require_n(const Options& o) {
  if (!o.n) throw std::invalid_argument("--n is required");
  return *o.n;
}

std::optional<int> degree_from_k(const Options& o) {
  if (!o.k) return std::nullopt;
  if (*o.k < 1) throw std::invalid_argument("--k must be at least 1");
  return *o.k + 1;
}

AltFormQ input_form(const Options& o, Report& rep) {
  const int n = require_n(o);
  const AltFormQ a = parse_form(form_text(o), n, degree_from_k(o));
  if (a.degree() < 2) throw std::invalid_argument("expected a form of degree at least 2");
  rep.inputs()["n"] = n;
  rep.inputs()["k"] = a.degree() - 1;
  rep.inputs()["scalar"] = o.scalar;
  rep.inputs()["form"] = print_form(a);
  return a;
}

template <class T>
Subspace<T> cast_subspace(const SubspaceQ& s) {
  return Subspace<T>::span(cast_matrix<T>(s.basis()));
}

SubspaceQ input_subspace(const Options& o, int n, Report& rep) {
  if (o.subspace.empty()) throw std::invalid_argument("--subspace is required");
  const SubspaceQ u = parse_subspace(o.subspace, n);
  rep.inputs()["subspace"] = o.subspace;
  return u;
}

// ---- commands -----------------------------------------------------------------

template <class T>
int run_check(const AltFormQ& exact, Report& rep) {
  const AltForm<T> omega = exact.cast<T>();
  const Matrix<T> sharp = sharp_matrix(omega);
  const int r = rank<T>(sharp);
  auto& res = rep.result();
  res["sharp_rank"] = r;
  res["nondegenerate"] = r == omega.dim();
  if (r == omega.dim()) {
    res["verdict"] = std::to_string(omega.degree() - 1) + "-plectic";
    return kSuccess;
  }
  res["verdict"] = "degenerate";
  res["kernel"] = to_json(Subspace<T>::kernel(sharp));
  return kNegative;
}

template <class T>
int run_ortho(const AltFormQ& exact, const SubspaceQ& u, int j, Report& rep) {
  const Subspace<T> perp = orth_complement(exact.cast<T>(), cast_subspace<T>(u), j);
  rep.result()["orth_complement"] = to_json(perp);
  return kSuccess;
}

template <class T>
int run_lagrangian(const AltFormQ& exact, const SubspaceQ& u, std::optional<int> j, Report& rep) {
  const AltForm<T> omega = exact.cast<T>();
  const Subspace<T> sub = cast_subspace<T>(u);
  const int k = omega.degree() - 1;
  bool any = false;
  Json verdicts = Json::array();
  for (int jj = j.value_or(1); jj <= j.value_or(k); ++jj) {
    const Subspace<T> perp = orth_complement(omega, sub, jj);
    const bool iso = perp.contains(sub);
    const bool lag = perp == sub;
    any = any || lag;
    verdicts.push_back(Json{{"j", jj}, {"isotropic", iso}, {"lagrangian", lag}, {"orth_complement_dim", perp.dim()}});
  }
  rep.result()["dim"] = sub.dim();
  rep.result()["verdicts"] = verdicts;
  return any ? kSuccess : kNegative;
}

template <class T>
FindWOptions<T> search_options(const Options& o, int n, Report& rep) {
  FindWOptions<T> opts;
  opts.shuffle_seed = o.seed;
  if (!o.hints.empty()) {
    std::istringstream in(read_file(o.hints));
    std::string line;
    Json echo = Json::array();
    while (std::getline(in, line)) {
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const SubspaceQ s = parse_subspace(line, n);
      echo.push_back(line);
      if (s.dim() == 1)
        opts.hint_vectors.push_back(cast_vector<T>(s.basis_vector(0)));
      else
        opts.hint_subspaces.push_back(cast_subspace<T>(s));
    }
    rep.inputs()["hints"] = echo;
  }
  if (o.seed) rep.inputs()["seed"] = *o.seed;
  return opts;
}

template <class T>
Json structure_json(const StandardStructure<T>& s) {
  return Json{{"c", s.c}, {"d", s.d}, {"W", to_json(s.W)}, {"complement", to_json(s.complement)}, {"chi", to_json(s.chi_matrix)}};
}

template <class T>
int run_find_w(const AltFormQ& exact, const Options& o, Report& rep) {
  const AltForm<T> omega = exact.cast<T>();
  const auto outcome = find_w(omega, search_options<T>(o, omega.dim(), rep));
  auto& res = rep.result();
  if (const auto* f = std::get_if<WFound<T>>(&outcome)) {
    res["outcome"] = "found";
    res["structure"] = structure_json(f->structure);
    res["log"] = f->log;
    return kSuccess;
  }
  if (const auto* d = std::get_if<WNotStandardByDimension>(&outcome)) {
    res["outcome"] = "not-standard-by-dimension";
    res["n"] = d->n;
    res["k"] = d->k;
    return kNegative;
  }
  res["outcome"] = "not-found";
  res["inconclusive"] = true;
  res["log"] = std::get<WNotFound>(outcome).log;
  return kNegative;
}

template <class T>
int run_standardize(const AltFormQ& exact, const Options& o, Report& rep) {
  const AltForm<T> omega = exact.cast<T>();
  const int n = omega.dim();
  auto& res = rep.result();
  std::optional<StandardStructure<T>> s;
  if (!o.subspace.empty()) {
    const SubspaceQ w = input_subspace(o, n, rep);
    const auto check = verify_standard(omega, cast_subspace<T>(w));
    if (const auto* v = std::get_if<StandardViolation<T>>(&check)) {
      res["outcome"] = "not-standard";
      res["violated"] = to_string(v->condition);
      res["message"] = v->message;
      Json witness = Json::array();
      for (const auto& x : v->witness) witness.push_back(to_json(x));
      res["witness"] = witness;
      return kNegative;
    }
    s = std::get<StandardStructure<T>>(check);
  } else {
    auto outcome = find_w(omega, search_options<T>(o, n, rep));
    if (auto* f = std::get_if<WFound<T>>(&outcome)) {
      s = std::move(f->structure);
    } else {
      res["outcome"] = std::holds_alternative<WNotFound>(outcome) ? "not-found" : "not-standard-by-dimension";
      return kNegative;
    }
  }
  Subspace<T> ltilde = s->complement;
  if (!o.complement.empty()) {
    ltilde = cast_subspace<T>(parse_subspace(o.complement, n));
    rep.inputs()["complement"] = o.complement;
  }
  const Subspace<T> l = lagrangian_complement(*s, ltilde);
  const Matrix<T> g = gamma(*s, l);
  const AltForm<T> can = canonical_form<T>(s->c, s->k);
  const AltForm<T> back = pullback_linear(g, can);
  bool match;
  if constexpr (ScalarTraits<T>::exact)
    match = back == omega;
  else
    match = (back - omega).coeffs().cwiseAbs().maxCoeff() <= 1e-9;
  res["outcome"] = match ? "standardized" : "mismatch";
  res["structure"] = structure_json(*s);
  res["lagrangian_complement"] = to_json(l);
  res["gamma"] = to_json(g);
  if constexpr (ScalarTraits<T>::exact) res["omega_can"] = print_form(can);
  res["pullback_matches"] = match;
  return match ? kSuccess : kNegative;
}

FiberSplit parse_split(const std::string& text, int n) {
  std::istringstream in(text);
  FiberSplit s;
  if (!(in >> s.base_dim >> s.fiber_dim)) {
    std::istringstream again(text);
    char comma;
    if (!(again >> s.base_dim >> comma >> s.fiber_dim) || comma != ',')
      throw std::invalid_argument("--split expects 'base fiber'");
  }
  if (s.base_dim < 0 || s.fiber_dim < 0 || s.n() != n) throw std::invalid_argument("--split does not add up to n");
  return s;
}

int run_poincare(const Options& o, Report& rep) {
  const int n = require_n(o);
  const PolyForm a = parse_poly_form(form_text(o), n, degree_from_k(o));
  if (o.split.empty()) throw std::invalid_argument("--split is required");
  const FiberSplit split = parse_split(o.split, n);
  rep.inputs()["n"] = n;
  rep.inputs()["split"] = Json{split.base_dim, split.fiber_dim};
  rep.inputs()["form"] = print_form(a);
  const PolyForm mu = homotopy_operator(a, split);
  const bool d_ok = mu.degree() == n || ext_d(mu) == a;
  const bool restricts = vanishes_on_N(mu, split);
  bool fiber_free = true;
  for (int i = split.base_dim; i < n; ++i) {
    PolyVectorField e = PolyMap::constant(n, unit_vector<Rational>(n, i));
    if (mu.degree() > 0 && !contract_poly(e, mu).is_zero()) fiber_free = false;
  }
  auto& res = rep.result();
  res["mu"] = print_form(mu);
  res["d_mu_equals_input"] = d_ok;
  res["mu_vanishes_on_N"] = restricts;
  res["fiber_contractions_vanish"] = fiber_free;
  return d_ok && restricts ? kSuccess : kNegative;
}

int run_moser(const Options& o, Report& rep) {
  MoserProblem p = o.file.empty() ? demo_problem() : parse_problem(read_file(o.file));
  rep.inputs()["problem"] = o.file.empty() ? "built-in acceptance fixture" : o.file;
  if (o.box) {
    p.box = Box::symmetric(p.dim(), *o.box);
  }
  if (o.step) p.step = *o.step;
  if (!o.samples.empty() || o.seed || o.box) {
    int on_L = 20, off_L = 30;
    if (!o.samples.empty()) {
      std::istringstream in(o.samples);
      char comma;
      if (!(in >> on_L >> comma >> off_L) || comma != ',' || on_L < 0 || off_L < 0)
        throw std::invalid_argument("--samples expects 'on_L,off_L'");
    }
    p.samples = moser_samples(p.box, p.split, on_L, off_L, o.seed.value_or(2024));
  }
  rep.inputs()["n"] = p.dim();
  rep.inputs()["k"] = p.k();
  rep.inputs()["split"] = Json{p.split.base_dim, p.split.fiber_dim};
  rep.inputs()["box"] = Json{{"lower", p.box.lower}, {"upper", p.box.upper}};
  rep.inputs()["step"] = p.step;
  rep.inputs()["omega"] = print_form(p.omega);
  rep.inputs()["omega_tilde"] = print_form(p.omega_tilde);
  const MoserReport r = verify_normal_form(p);
  auto& res = rep.result();
  res["mu"] = print_form(moser_mu(p));
  res["steps"] = r.steps;
  res["certification"] = Json{{"points", r.certification.points},
                              {"times", r.certification.times},
                              {"nondegenerate", r.certification.nondegenerate},
                              {"min_relative_singular_value", r.certification.min_relative_singular_value}};
  res["max_residual"] = r.max_residual;
  res["max_residual_on_L"] = r.max_residual_on_L;
  res["max_residual_off_L"] = r.max_residual_off_L;
  Json samples = Json::array();
  for (const auto& s : r.samples)
    samples.push_back(Json{{"point", to_json(s.point)},
                           {"image", to_json(s.image)},
                           {"on_L", s.on_L},
                           {"residual", s.residual},
                           {"jacobian_condition", s.jacobian_condition}});
  res["samples"] = samples;
  const bool ok = r.certification.nondegenerate && r.max_residual <= 1e-5 && r.max_residual_on_L <= 1e-9;
  res["verified"] = ok;
  return ok ? kSuccess : kNegative;
}

template <class T>
int dispatch(const std::string& cmd, const Options& o, Report& rep) {
  if (cmd == "poincare") return run_poincare(o, rep);
  if (cmd == "moser-demo") return run_moser(o, rep);
  const AltFormQ omega = input_form(o, rep);
  if (cmd == "check") return run_check<T>(omega, rep);
  if (cmd == "find-w") return run_find_w<T>(omega, o, rep);
  if (cmd == "standardize") return run_standardize<T>(omega, o, rep);
  const SubspaceQ u = input_subspace(o, omega.dim(), rep);
  if (o.j) rep.inputs()["j"] = *o.j;
  if (cmd == "ortho") {
    if (!o.j) throw std::invalid_argument("--j is required");
    return run_ortho<T>(omega, u, *o.j, rep);
  }
  return run_lagrangian<T>(omega, u, o.j, rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact multisymplectic linear algebra"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub, bool needs_form) {
    if (needs_form) sub->add_option("form", o.form, "Form, e.g. \"dx145 + dx246\"");
    sub->add_option("--file", o.file, needs_form ? "Read the form from a file" : "Problem file");
    sub->add_option("--n", o.n, "Ambient dimension")->check(CLI::Range(1, kMaxDimension));
    sub->add_option("--k", o.k, "Form degree is k + 1");
    sub->add_option("--scalar", o.scalar, "exact or float")->check(CLI::IsMember({"exact", "float"}));
    sub->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  };
  auto* check = app.add_subcommand("check", "Nondegeneracy and rank of omega^sharp");
  common(check, true);
  auto* ortho = app.add_subcommand("ortho", "j-th orthogonal complement of a subspace");
  common(ortho, true);
  ortho->add_option("--subspace", o.subspace, "\"e2,e5\" or \"(1,0,...);(...)\"");
  ortho->add_option("--j", o.j, "Order j");
  auto* lag = app.add_subcommand("lagrangian", "j-isotropy and j-Lagrangian verdicts");
  common(lag, true);
  lag->add_option("--subspace", o.subspace, "\"e2,e5\" or \"(1,0,...);(...)\"");
  lag->add_option("--j", o.j, "Order j (default: every j)");
  auto* fw = app.add_subcommand("find-w", "Search for the standard subspace W");
  common(fw, true);
  fw->add_option("--hints", o.hints, "File of hint vectors or subspaces, one per line");
  fw->add_option("--seed", o.seed, "Shuffle the candidate pool");
  auto* st = app.add_subcommand("standardize", "Lagrangian complement and canonical coordinates");
  common(st, true);
  st->add_option("--subspace", o.subspace, "W (default: search)");
  st->add_option("--complement", o.complement, "Complement of W to correct (default: coordinate complement)");
  st->add_option("--hints", o.hints, "File of hint vectors or subspaces, one per line");
  st->add_option("--seed", o.seed, "Shuffle the candidate pool");
  auto* pc = app.add_subcommand("poincare", "Relative homotopy primitive mu with d mu = form");
  common(pc, true);
  pc->add_option("--split", o.split, "\"base fiber\" dimensions");
  auto* md = app.add_subcommand("moser-demo", "Moser flow normal form on a problem file or the built-in fixture");
  common(md, false);
  md->add_option("--box", o.box, "Half width of the box around the origin");
  md->add_option("--step", o.step, "RK4 step");
  md->add_option("--samples", o.samples, "\"on_L,off_L\" sample counts");
  md->add_option("--seed", o.seed, "Sample seed");

  std::string command = "";
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    Report rep(argc > 1 ? argv[1] : "");
    rep.doc["status"] = "input-error";
    rep.doc["error"] = e.what();
    std::cout << rep.render(ReportFormat::Text);
    return kInputError;
  }
  for (auto* sub : app.get_subcommands()) command = sub->get_name();
  Report rep(command);
  int code = kInputError;
  try {
    code = o.scalar == "float" ? dispatch<double>(command, o, rep) : dispatch<Rational>(command, o, rep);
    rep.doc["status"] = code == kSuccess ? "ok" : "negative";
  } catch (const FlowError& e) {
    rep.doc["status"] = "negative";
    rep.doc["error"] = e.what();
    code = kNegative;
  } catch (const std::exception& e) {
    rep.doc["status"] = "input-error";
    rep.doc["error"] = e.what();
    code = kInputError;
  }
  rep.doc["exit_code"] = code;
  std::cout << rep.render(o.format == "json" ? ReportFormat::Json : ReportFormat::Text);
  return code;
}
