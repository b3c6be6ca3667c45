#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "triplekit/geometry.hpp"
#include "triplekit/io.hpp"
#include "triplekit/witt.hpp"

using namespace triplekit;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitInputError = 3;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(output_path);
  if (!out) throw std::runtime_error("cannot open '" + output_path + "' for writing");
  out << text << "\n";
}

std::vector<Rational> parse_rational_list(const std::string& csv) {
  std::vector<Rational> out;
  std::string item;
  std::istringstream is(csv);
  while (std::getline(is, item, ',')) {
    if (!item.empty()) out.push_back(Rational::from_string(item));
  }
  return out;
}

double float_tolerance(double cli_value) {
  if (cli_value > 0) return cli_value;
  if (const char* env = std::getenv("TRIPLEKIT_FLOAT_TOL")) return std::atof(env);
  return 1e-9;
}

json invariants_json(const SymmetricTriple& t, bool use_float, double tol) {
  json j;
  TripleReport rep = t.verify();
  j["verify_pass"] = rep.pass();
  j["dim_g"] = t.dim_g();
  j["dim_h"] = t.dim_h();
  j["dim_m"] = t.dim_m();
  j["signature"] = {rep.m_signature.neg, rep.m_signature.pos, rep.m_signature.null};
  j["solvable"] = t.is_solvable();
  j["nilpotent"] = t.is_nilpotent();
  j["center_dim"] = t.center().dim();
  try {
    IteratedDecomposition iter = iterate_decompose(t);
    json dims = json::array();
    for (const auto& d : iter.dims()) dims.push_back({d[0], d[1], d[2]});
    j["iterated_dims"] = dims;
    j["w_final_dim"] = iter.w_final.dim();
  } catch (const std::exception& e) {
    j["iterated_dims"] = nullptr;
    j["iterated_error"] = e.what();
  }
  try {
    MaxCenterBasis basis = max_center_basis(t);
    std::vector<Matrix> fs = fij_operators(t, basis);
    Matrix gw = t.form_on_m().restrict_gram(basis.w);
    if (use_float) {
      ApproxSpectralData sd = simultaneous_diagonalize_float(fs, gw, basis.z.size(), tol);
      json vals = json::array();
      for (const auto& rec : sd.fvals) vals.push_back(rec);
      j["spectral_float"] = vals;
      j["spectral_exact"] = false;
      j["float_tol"] = sd.tol;
    } else {
      SpectralData sd = simultaneous_diagonalize(fs, gw, basis.z.size());
      json recs = json::array();
      std::size_t w_nil = 0;
      for (const auto& rec : sd.records) {
        json r;
        json f = json::array();
        for (std::size_t i = 0; i < rec.fvals.rows(); ++i)
          for (std::size_t k = 0; k < rec.fvals.cols(); ++k) f.push_back(rec.fvals(i, k).str());
        r["f"] = f;
        r["epsilon"] = rec.epsilon;
        if (rec.epsilon == 0) ++w_nil;
        recs.push_back(std::move(r));
      }
      j["spectral"] = recs;
      j["spectral_exact"] = true;
      j["w_nil_dim"] = w_nil;
    }
  } catch (const std::exception& e) {
    j["spectral_error"] = e.what();
  }
  auto dres = t.decomposability();
  j["decomposability"] = dres.kind == DecompositionResult::Kind::Decomposable   ? "decomposable"
                         : dres.kind == DecompositionResult::Kind::Indecomposable
                             ? "indecomposable"
                             : "unknown";
  j["decomposability_reason"] = dres.reason;
  return j;
}

json spectral_multiset(const SymmetricTriple& t) {
  MaxCenterBasis basis = max_center_basis(t);
  SpectralData sd = simultaneous_diagonalize(fij_operators(t, basis),
                                             t.form_on_m().restrict_gram(basis.w), basis.z.size());
  std::vector<std::string> flat;
  for (const auto& rec : sd.records) {
    std::string key;
    for (std::size_t i = 0; i < rec.fvals.rows(); ++i)
      for (std::size_t k = 0; k < rec.fvals.cols(); ++k) key += rec.fvals(i, k).str() + ",";
    flat.push_back(key);
  }
  std::sort(flat.begin(), flat.end());
  return json(flat);
}

int run_isomorphic(const std::string& file_a, const std::string& file_b,
                   const std::string& scalings_csv, const std::string& output) {
  std::string text_a = read_input(file_a), text_b = read_input(file_b);
  std::optional<FamilyParams> params_a, params_b;
  try {
    params_a = family_params_from_json_string(text_a);
    params_b = family_params_from_json_string(text_b);
  } catch (const std::exception&) {
  }
  if (params_a && params_b && params_a->index() == params_b->index()) {
    IsoDecision dec = family_isomorphic(*params_a, *params_b);
    if (dec.verdict == IsoDecision::Verdict::Isomorphic) {
      write_output(certificate_to_json_string(*dec.certificate), output);
      return kExitOk;
    }
    if (dec.verdict == IsoDecision::Verdict::NotIsomorphic) {
      std::cout << "not isomorphic: " << dec.detail << "\n";
      return kExitNegative;
    }
    std::cout << "unknown: " << dec.detail << "\n";
    return kExitUnknown;
  }

  SymmetricTriple t1 = triple_from_json_string(text_a);
  SymmetricTriple t2 = triple_from_json_string(text_b);
  if (!t1.verify().pass() || !t2.verify().pass())
    throw std::invalid_argument("isomorphic: inputs must be verified symmetric triples");

  if (t1.dim_g() != t2.dim_g() || t1.dim_h() != t2.dim_h() ||
      !(t1.m_signature() == t2.m_signature()) || t1.center().dim() != t2.center().dim() ||
      t1.is_nilpotent() != t2.is_nilpotent()) {
    std::cout << "not isomorphic (invariants differ)\n";
    return kExitNegative;
  }
  bool spectral_checked = false;
  try {
    if (spectral_multiset(t1) != spectral_multiset(t2)) {
      std::cout << "not isomorphic (spectral invariants differ)\n";
      return kExitNegative;
    }
    spectral_checked = true;
  } catch (const std::exception&) {
  }

  Signature sig = t1.m_signature();
  if (std::min(sig.neg, sig.pos) == 1 && t1.center().dim() == 1 && spectral_checked) {
    auto f_of = [](const SymmetricTriple& t) {
      MaxCenterBasis basis = max_center_basis(t);
      SpectralData sd = simultaneous_diagonalize(
          fij_operators(t, basis), t.form_on_m().restrict_gram(basis.w), 1);
      std::vector<Rational> f;
      for (const auto& rec : sd.records) f.push_back(rec.fvals(0, 0));
      return f;
    };
    IsoDecision dec = lorentz_isomorphic(f_of(t1), f_of(t2));
    if (dec.verdict == IsoDecision::Verdict::Isomorphic) {
      GeneratorGrid grid;
      grid.scalings.push_back(dec.certificate->radicand);
      grid.scalings.push_back(dec.certificate->radicand.inverse());
      if (auto witness = brute_force_iso(t1, t2, grid)) {
        write_output(certificate_to_json_string(*witness), output);
        return kExitOk;
      }
      std::cout << "unknown (decider positive, bounded witness search failed)\n";
      return kExitUnknown;
    }
    std::cout << "not isomorphic\n";
    return kExitNegative;
  }

  GeneratorGrid grid;
  for (const auto& v : parse_rational_list(scalings_csv))
    if (v.sign() > 0) grid.scalings.push_back(v);
  if (auto witness = brute_force_iso(t1, t2, grid)) {
    write_output(certificate_to_json_string(*witness), output);
    return kExitOk;
  }
  std::cout << "unknown (no witness within the bounded search)\n";
  return kExitUnknown;
}

FamilyParams parse_family(const std::string& family, const std::string& params_text,
                          const std::string& f_csv) {
  json wrapper;
  wrapper["family"] = family;
  if (!params_text.empty()) {
    std::string text = params_text;
    if (text.front() == '@') text = read_input(text.substr(1));
    wrapper["params"] = json::parse(text);
  } else if (family == "lorentz") {
    json f = json::array();
    for (const auto& v : parse_rational_list(f_csv)) f.push_back(v.str());
    wrapper["params"] = {{"f", f}};
  } else {
    throw std::invalid_argument("normal-form: --params is required for family '" + family + "'");
  }
  auto parsed = family_params_from_json_string(wrapper.dump());
  if (!parsed) throw std::invalid_argument("normal-form: unable to parse parameters");
  return *parsed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"triplekit: solvable pseudo-Riemannian symmetric triples, exactly"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string output;
  app.add_option("--output", output, "write the primary JSON result to a file");
  bool exact_flag = false;
  double float_tol = 0;
  app.add_flag("--exact", exact_flag, "force the exact spectral path (default)");
  auto* float_opt =
      app.add_option("--float", float_tol, "use the floating spectral path at this tolerance")
          ->expected(0, 1);

  std::string in_a, in_b, family, params_text, f_csv, point_csv, values_csv, scalings_csv,
      tensors = "abf";
  std::size_t grid_p = 2, grid_q = 2, shards = 1;

  auto* verify = app.add_subcommand("verify", "check every symmetric-triple axiom");
  verify->add_option("file", in_a, "triple JSON ('-' for stdin)")->required();

  auto* decompose =
      app.add_subcommand("decompose", "iterated adapted decomposition: dims and chain basis");
  decompose->add_option("file", in_a)->required();

  auto* invariants = app.add_subcommand("invariants", "signature, center, spectral data");
  invariants->add_option("file", in_a)->required();

  auto* ricci = app.add_subcommand("ricci", "Ricci form on m");
  ricci->add_option("file", in_a)->required();

  auto* normal = app.add_subcommand("normal-form", "construct a normal-form triple");
  normal->add_option("family", family,
                     "lorentz | least-nilpotent | Ia | Ib | IIa | IIb | nil22 | nil23 | nil24 | III | IV")
      ->required();
  normal->add_option("--params", params_text, "family parameters as JSON (or @file)");
  normal->add_option("--f", f_csv, "comma-separated f-list (lorentz shorthand)");

  auto* isomorphic = app.add_subcommand("isomorphic", "decide isomorphism of two triples");
  isomorphic->add_option("a", in_a)->required();
  isomorphic->add_option("b", in_b)->required();
  isomorphic->add_option("--scalings", scalings_csv, "extra sqrt-scaling candidates");

  auto* metric = app.add_subcommand("metric-eval", "Gram matrix of the Lorentzian realization");
  metric->add_option("--f", f_csv, "comma-separated f-list")->required();
  metric->add_option("--point", point_csv, "w-coordinates of the evaluation point")->required();

  auto* center = app.add_subcommand("center", "center of the transvection group");
  center->add_option("--f", f_csv, "comma-separated f-list")->required();

  auto* enumerate = app.add_subcommand("enumerate", "maximal-center coefficient census");
  enumerate->add_option("--p", grid_p)->required();
  enumerate->add_option("--q", grid_q)->required();
  enumerate->add_option("--values", values_csv, "comma-separated value set")->required();
  enumerate->add_option("--tensors", tensors, "subset of 'abf' to enumerate (default abf)");
  enumerate->add_option("--shards", shards, "parallel shards");

  CLI11_PARSE(app, argc, argv);
  double tol = float_tolerance(float_tol);
  bool use_float = float_opt->count() > 0 && !exact_flag;

  try {
    if (*verify) {
      SymmetricTriple t = triple_from_json_string(read_input(in_a));
      TripleReport rep = t.verify();
      std::cout << rep.summary();
      if (!output.empty()) write_output(report_to_json_string(rep), output);
      return rep.pass() ? kExitOk : kExitNegative;
    }
    if (*decompose) {
      SymmetricTriple t = triple_from_json_string(read_input(in_a));
      IteratedDecomposition iter = iterate_decompose(t);
      json j;
      json dims = json::array();
      for (const auto& d : iter.dims()) dims.push_back({d[0], d[1], d[2]});
      j["dims"] = dims;
      j["w_final_dim"] = iter.w_final.dim();
      AdaptedBasis chain = iter.chain_basis(t.form_on_m());
      auto vecs_json = [](const std::vector<Vector>& vs) {
        json arr = json::array();
        for (const auto& v : vs) {
          json row = json::array();
          for (const auto& x : v) row.push_back(x.str());
          arr.push_back(std::move(row));
        }
        return arr;
      };
      j["basis"] = {{"e", vecs_json(chain.e)},
                    {"w", vecs_json(chain.w)},
                    {"u", vecs_json(chain.u)},
                    {"estar", vecs_json(chain.estar)}};
      json ns = json::array();
      for (const auto& v : chain.nonsquare_norms) ns.push_back(v.str());
      j["nonsquare_norms"] = ns;
      write_output(j.dump(2), output);
      return kExitOk;
    }
    if (*invariants) {
      SymmetricTriple t = triple_from_json_string(read_input(in_a));
      write_output(invariants_json(t, use_float, tol).dump(2), output);
      return kExitOk;
    }
    if (*ricci) {
      SymmetricTriple t = triple_from_json_string(read_input(in_a));
      Matrix ric = t.ricci().gram();
      json rows = json::array();
      for (std::size_t i = 0; i < ric.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < ric.cols(); ++k) row.push_back(ric(i, k).str());
        rows.push_back(std::move(row));
      }
      json j;
      j["ricci"] = rows;
      write_output(j.dump(2), output);
      for (std::size_t i = 0; i < ric.rows(); ++i)
        for (std::size_t k = i; k < ric.cols(); ++k)
          if (!ric(i, k).is_zero())
            std::cout << "Ric(" << t.algebra().labels()[t.m_indices()[i]] << ","
                      << t.algebra().labels()[t.m_indices()[k]] << ") = " << ric(i, k).str()
                      << "\n";
      return kExitOk;
    }
    if (*normal) {
      FamilyParams params = parse_family(family, params_text, f_csv);
      SymmetricTriple t = build_family(params);
      write_output(annotated_triple_json(t, params), output);
      return kExitOk;
    }
    if (*isomorphic) return run_isomorphic(in_a, in_b, scalings_csv, output);
    if (*metric) {
      std::vector<Rational> f = parse_rational_list(f_csv);
      std::vector<Rational> coords = parse_rational_list(point_csv);
      if (coords.size() == f.size() + 2) coords.resize(f.size());
      Matrix g = metric_at(coords, f);
      json rows = json::array();
      for (std::size_t i = 0; i < g.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < g.cols(); ++k) row.push_back(g(i, k).str());
        rows.push_back(std::move(row));
      }
      write_output(json{{"gram", rows}}.dump(2), output);
      return kExitOk;
    }
    if (*center) {
      CenterDescription cd = center_of_transvection_group(parse_rational_list(f_csv));
      json j;
      if (cd.kind == CenterDescription::Kind::ZOnly) {
        j["kind"] = "Z_only";
      } else {
        j["kind"] = "Z_times_lattice";
        j["lambda_coeff"] = cd.lambda_coeff.str();
        j["lambda"] = "c * 2*pi / sqrt(-f^1), c = " + cd.lambda_coeff.str();
        j["lambda_float"] = cd.lambda_float;
        j["m"] = cd.m;
      }
      write_output(j.dump(2), output);
      return kExitOk;
    }
    if (*enumerate) {
      GridSpec spec;
      spec.p = grid_p;
      spec.q = grid_q;
      spec.value_set = parse_rational_list(values_csv);
      spec.use_a = tensors.find('a') != std::string::npos;
      spec.use_b = tensors.find('b') != std::string::npos;
      spec.use_f = tensors.find('f') != std::string::npos;
      spec.shards = shards;
      std::vector<CensusEntry> census = enumerate_max_center(spec);
      json entries = json::array();
      for (const auto& e : census) {
        json ej;
        ej["jacobi_ok"] = e.jacobi_ok;
        ej["relations_ok"] = e.relations_ok;
        ej["bordemann_ok"] = e.bordemann_ok;
        if (e.jacobi_ok) ej["class_id"] = e.class_id;
        ej["indecomposable"] =
            e.indecomposable_verdict == DecompositionResult::Kind::Indecomposable;
        json b = json::array(), f = json::array(), a = json::array();
        std::size_t p = e.coefficients.p(), s = e.coefficients.s();
        for (std::size_t i = 0; i < p; ++i)
          for (std::size_t k = 0; k < p; ++k)
            for (std::size_t l = 0; l < p; ++l) {
              for (std::size_t m = 0; m < p; ++m)
                if (!e.coefficients.b(i, k, l, m).is_zero())
                  b.push_back({i, k, l, m, e.coefficients.b(i, k, l, m).str()});
              for (std::size_t al = 0; al < s; ++al)
                if (!e.coefficients.a(i, k, l, al).is_zero())
                  a.push_back({i, k, l, al, e.coefficients.a(i, k, l, al).str()});
            }
        for (std::size_t i = 0; i < p; ++i)
          for (std::size_t k = 0; k < p; ++k)
            for (std::size_t al = 0; al < s; ++al)
              for (std::size_t be = 0; be < s; ++be)
                if (!e.coefficients.f(i, k, al, be).is_zero())
                  f.push_back({i, k, al, be, e.coefficients.f(i, k, al, be).str()});
        ej["b"] = b;
        ej["f"] = f;
        ej["a"] = a;
        entries.push_back(std::move(ej));
      }
      json j;
      j["entries"] = entries;
      j["class_count"] = census_class_count(census);
      write_output(j.dump(2), output);
      return kExitOk;
    }
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
