// ddx2: verify, search and bound diameter-2 circulant and Abelian Cayley
// graphs.
//
// Exit codes: 0 success/verified, 1 refuted, 2 usage or input error,
// 3 time budget exhausted (partial results are still written).

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ddx2/ddx2.hpp"

namespace {

using namespace ddx2;

enum Exit { kOk = 0, kRefuted = 1, kUsage = 2, kBudget = 3 };

struct Globals {
  std::string format = "table";
  std::string output;
  unsigned jobs = default_jobs();
  double time_budget = -1;

  Deadline deadline() const {
    return time_budget >= 0 ? Deadline::after_seconds(time_budget) : Deadline{};
  }
};

// What a command produced: NDJSON result lines for --output and json, CSV
// rows for csv, and text for the table view.
struct Outcome {
  std::vector<Json> records;
  std::string csv_header;
  std::vector<std::string> csv_rows;
  std::ostringstream table;
  int code = kOk;
  std::string status = "complete";
  std::map<std::string, std::string> extra;  // added to the manifest parameters
};

std::string results_text(const Outcome& out) {
  std::string text;
  for (const auto& r : out.records) text += r.dump() + '\n';
  return text;
}

void emit(const Globals& g, Outcome& out, const std::string& command, std::map<std::string, std::string> params,
          const std::string& started) {
  if (g.format == "json") {
    std::cout << results_text(out);
  } else if (g.format == "csv") {
    if (!out.csv_header.empty()) std::cout << out.csv_header << '\n';
    for (const auto& row : out.csv_rows) std::cout << row << '\n';
  } else {
    std::cout << out.table.str();
  }
  if (!g.output.empty()) {
    RunManifest m;
    m.command = command;
    for (auto& [k, v] : out.extra) params[k] = v;
    m.parameters = std::move(params);
    m.started = started;
    m.finished = utc_timestamp();
    m.status = out.status;
    write_results(g.output, results_text(out), m);
  }
}

std::string join(const std::vector<std::uint64_t>& xs, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + std::to_string(xs[i]);
  return s;
}

std::string join_elements(const std::vector<GroupElement>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + to_string(xs[i]);
  return s;
}

// --- verify ---------------------------------------------------------------

struct VerifyCirculantArgs {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> gens;
  bool self_inverse = false;
};

void run_verify_circulant(const Globals& g, const VerifyCirculantArgs& a, Outcome& out) {
  auto x = circulant_set(a.n, a.gens, a.self_inverse);
  CoverageOptions opts;
  opts.jobs = g.jobs;
  auto rep = check_two_coverage(x.spec(), x, opts);
  std::vector<std::uint64_t> uncovered;
  for (const auto& e : rep.uncovered) uncovered.push_back(e.coords[0]);
  out.records.push_back(Json{{"kind", "circulant"},
                             {"n", a.n},
                             {"generators", a.gens},
                             {"self_inverse_included", a.self_inverse},
                             {"degree", x.degree()},
                             {"covered", rep.covered},
                             {"is_diameter_2", rep.is_diameter_2},
                             {"uncovered", uncovered}});
  out.csv_header = "n,generators,self_inverse_included,degree,covered,is_diameter_2";
  out.csv_rows.push_back(std::to_string(a.n) + "," + join(a.gens, ";") + "," + (a.self_inverse ? "true" : "false") +
                         "," + std::to_string(x.degree()) + "," + std::to_string(rep.covered) + "," +
                         (rep.is_diameter_2 ? "true" : "false"));
  out.table << "circulant Z_" << a.n << " generators " << join(a.gens) << (a.self_inverse ? " + n/2" : "")
            << ", degree " << x.degree() << '\n';
  out.table << "diameter 2: " << (rep.is_diameter_2 ? "yes" : "no") << '\n';
  if (!rep.is_diameter_2) {
    out.table << "uncovered (" << rep.order - rep.covered << "): " << join(uncovered, ", ")
              << (rep.uncovered_truncated ? ", ..." : "") << '\n';
  }
  out.code = rep.is_diameter_2 ? kOk : kRefuted;
}

struct VerifyFamilyArgs {
  std::string variant;
  std::uint64_t n = 0;
  std::vector<std::uint64_t> U, V, W;
  std::uint64_t p = 0, s = 0, t = 0;
  unsigned budget = 4;
};

void run_verify_family(const Globals&, const VerifyFamilyArgs& a, Outcome& out) {
  auto kind = parse_variant_kind(a.variant);
  auto family = family_from_table(kind, a.n, a.U, a.V, a.W);
  Ambient ambient;
  if (kind == VariantKind::UnrestrictedCyclic) {
    if (a.s == 0 || a.t == 0) throw Error("the unrestricted variant needs --s and --t");
    ambient = ProductParams{a.s, a.t};
  } else {
    if (a.p == 0) throw Error("this variant needs --p");
    ambient = GaloisParams{a.p};
  }
  Json rec{{"kind", "family"}, {"variant", a.variant}, {"n", a.n}, {"U", family.U}, {"V", family.V},
           {"W", family.W}};
  if (a.p) rec["p"] = a.p;
  if (a.s) rec["s"] = a.s, rec["t"] = a.t;
  out.csv_header = "variant,n,U,V,W,order,degree,extras,is_diameter_2";
  try {
    auto v = verify_family_instance(family, ambient, a.budget);
    rec["order"] = v.order;
    rec["degree"] = v.degree;
    rec["base_degree"] = v.base_degree;
    rec["extras"] = v.completion.size();
    rec["is_diameter_2"] = v.is_diameter_2;
    out.table << (v.is_diameter_2 ? "verified" : "refuted") << ": order " << v.order << ", degree " << v.degree
              << " (blocks and standard extras " << v.base_degree << ", completion " << v.completion.size()
              << " elements)\n";
    if (!v.completion.empty()) out.table << "completion: " << join_elements(v.completion) << '\n';
    out.csv_rows.push_back(a.variant + "," + std::to_string(a.n) + "," + join(family.U, ";") + "," +
                           join(family.V, ";") + "," + join(family.W, ";") + "," + std::to_string(v.order) + "," +
                           std::to_string(v.degree) + "," + std::to_string(v.completion.size()) + "," +
                           (v.is_diameter_2 ? "true" : "false"));
    out.code = v.is_diameter_2 ? kOk : kRefuted;
  } catch (const CompletionFailure& e) {
    rec["is_diameter_2"] = false;
    rec["error"] = e.what();
    out.table << "refuted: " << e.what() << '\n';
    out.csv_rows.push_back(a.variant + "," + std::to_string(a.n) + ",,,,,,," + "false");
    out.code = kRefuted;
  }
  out.records.push_back(rec);
}

void run_verify_catalog(const Globals&, const std::string& path, Outcome& out) {
  auto records = read_catalog(path);
  bool all = true;
  out.csv_header = "d,n,computed_degree,diameter_2,generators_sorted";
  for (const auto& r : records) {
    auto c = check_record(r);
    all = all && c.ok();
    out.records.push_back(Json{{"d", r.d},
                               {"n", r.n},
                               {"computed_degree", c.computed_degree},
                               {"degree_matches", c.degree_matches},
                               {"is_diameter_2", c.diameter_2()},
                               {"generators_sorted", c.generators_sorted}});
    out.csv_rows.push_back(std::to_string(r.d) + "," + std::to_string(r.n) + "," +
                           std::to_string(c.computed_degree) + "," + (c.diameter_2() ? "true" : "false") + "," +
                           (c.generators_sorted ? "true" : "false"));
    out.table << "d=" << r.d << " n=" << r.n << ": degree " << c.computed_degree
              << (c.degree_matches ? "" : " (MISMATCH)") << ", diameter 2 " << (c.diameter_2() ? "yes" : "no");
    if (!c.generators_sorted) out.table << "  [flag: generators listed out of order]";
    out.table << '\n';
  }
  out.table << (all ? "all " : "not all ") << records.size() << " records verified\n";
  out.code = all ? kOk : kRefuted;
}

// --- search ---------------------------------------------------------------

struct SearchFamilyArgs {
  unsigned l = 0;
  std::string variant;
  std::uint64_t n_start = 0;
  bool perfect = false;
};

void run_search_family(const Globals& g, const SearchFamilyArgs& a, Outcome& out) {
  FamilySearchOptions opts;
  opts.jobs = g.jobs;
  opts.deadline = g.deadline();
  if (a.n_start) opts.n_start = a.n_start;
  opts.require_perfect = a.perfect;
  opts.on_order = [](std::uint64_t n) { std::cerr << "trying n=" << n << '\n'; };
  out.csv_header = family_csv_header();
  try {
    auto r = search_max_n(a.l, parse_variant_kind(a.variant), opts);
    if (r.n == 0) {
      out.table << "l=" << a.l << " " << a.variant << ": no family found\n";
      out.code = kRefuted;
      return;
    }
    out.table << "l=" << a.l << " " << a.variant << (r.variant.include_c0 ? " (with C_0)" : "") << ": n=" << r.n
              << ", " << r.witnesses.size() << " witness(es) up to multipliers\n";
    for (const auto& f : r.witnesses) {
      out.records.push_back(to_json(f, a.l));
      out.csv_rows.push_back(family_csv_row(f, a.l));
      out.table << "  U=" << join(f.U) << " V=" << join(f.V) << " W=" << join(f.W) << '\n';
    }
  } catch (const TimeBudgetExceeded& e) {
    std::cerr << e.what() << "; frontier n=" << e.frontier << '\n';
    out.table << "partial: time budget exhausted, largest n not refuted is " << e.frontier << '\n';
    out.status = "budget_exhausted";
    out.extra["frontier"] = std::to_string(e.frontier);
    out.code = kBudget;
  }
}

struct SearchExtremalArgs {
  std::uint64_t d = 0;
  std::uint64_t n_max = 0;
};

void run_search_extremal(const Globals& g, const SearchExtremalArgs& a, Outcome& out) {
  ExtremalSearchOptions opts;
  opts.jobs = g.jobs;
  opts.deadline = g.deadline();
  if (a.n_max) opts.n_max = a.n_max;
  opts.on_order = [](std::uint64_t n) { std::cerr << "trying n=" << n << '\n'; };
  out.csv_header = "d,n,generators,self_inverse_included";
  try {
    auto r = search_extremal(a.d, opts);
    out.records.push_back(to_json(r));
    out.csv_rows.push_back(std::to_string(r.d) + "," + std::to_string(r.n) + "," + join(r.generators, ";") + "," +
                           (r.self_inverse_included ? "true" : "false"));
    out.table << "d=" << r.d << ": n=" << r.n << ", generators " << join(r.generators, ", ")
              << (r.self_inverse_included ? " + n/2" : "") << '\n';
  } catch (const TimeBudgetExceeded& e) {
    std::cerr << e.what() << "; frontier n=" << e.frontier << '\n';
    out.table << "partial: time budget exhausted, largest n not refuted is " << e.frontier << '\n';
    out.status = "budget_exhausted";
    out.extra["frontier"] = std::to_string(e.frontier);
    out.code = kBudget;
  }
}

// --- bounds ---------------------------------------------------------------

struct BoundsArgs {
  std::uint64_t d = 0;
  std::uint64_t k = 2;
  std::vector<std::string> delta;  // four entries, "?" for unknown
};

void run_bounds(const Globals&, const BoundsArgs& a, Outcome& out) {
  std::optional<DeltaTable> delta;
  if (!a.delta.empty()) {
    if (a.delta.size() != 4) throw Error("--delta takes four values for d mod 4 = 0..3 ('?' if unknown)");
    DeltaTable t;
    for (int i = 0; i < 4; ++i) {
      if (a.delta[i] != "?") t[i] = std::stoll(a.delta[i]);
    }
    delta = t;
  }
  auto r = bound_report(a.d, a.k, delta);
  Json rec{{"d", r.d}, {"k", r.k}, {"mac_upper", r.mac_upper.str()}};
  if (r.lac_lower) rec["lac_lower"] = *r.lac_lower;
  rec["construction_orders"] = r.construction_orders;
  if (r.quadratic_coefficient) rec["quadratic_coefficient"] = to_fraction(*r.quadratic_coefficient);
  out.records.push_back(rec);
  out.csv_header = "d,k,mac_upper,lac_lower,quadratic_coefficient";
  out.csv_rows.push_back(std::to_string(r.d) + "," + std::to_string(r.k) + "," + r.mac_upper.str() + "," +
                         (r.lac_lower ? std::to_string(*r.lac_lower) : "") + "," +
                         (r.quadratic_coefficient ? to_fraction(*r.quadratic_coefficient) : ""));
  out.table << "d " << r.d << ", k " << r.k << '\n' << "mac_upper " << r.mac_upper << '\n';
  if (r.lac_lower) out.table << "lac_lower " << *r.lac_lower << '\n';
  for (const auto& [id, order] : r.construction_orders) out.table << "construction " << id << " order " << order << '\n';
  if (r.quadratic_coefficient) {
    out.table << "quadratic_coefficient " << to_fraction(*r.quadratic_coefficient) << " ("
              << to_decimal(*r.quadratic_coefficient, 5) << ")\n";
  }
}

DecimalPower parse_decimal_power(const std::string& text) {
  auto e = text.find_first_of("eE");
  try {
    if (e == std::string::npos) return {std::stoull(text), 0};
    return {std::stoull(text.substr(0, e)), std::stoi(text.substr(e + 1))};
  } catch (const std::exception&) {
    throw Error("cannot parse '" + text + "' as MANTISSAeEXPONENT");
  }
}

struct CullinanHajirArgs {
  std::string base;
  std::string epsilon;
  std::uint64_t k = 1;
  std::string x0 = "1e100";
  std::uint64_t multiplier = 1;
};

void run_cullinan_hajir(const Globals&, const CullinanHajirArgs& a, Outcome& out) {
  CongruencePrimeTriple triple{a.k, parse_decimal_power(a.x0), parse_rational(a.epsilon)};
  auto r = cullinan_hajir_coefficient(parse_rational(a.base), triple, a.multiplier);
  out.records.push_back(Json{{"base", a.base},
                             {"epsilon", a.epsilon},
                             {"k", a.k},
                             {"delta", to_fraction(r.delta)},
                             {"adjusted", to_fraction(r.adjusted)},
                             {"adjusted_decimal", to_decimal(r.adjusted, 5)},
                             {"degree_threshold", r.degree_threshold.str()}});
  out.csv_header = "base,epsilon,delta,adjusted,degree_threshold";
  out.csv_rows.push_back(a.base + "," + a.epsilon + "," + to_decimal(r.delta, 8) + "," + to_decimal(r.adjusted, 5) +
                         "," + r.degree_threshold.str());
  out.table << "delta " << to_decimal(r.delta, 8) << '\n'
            << "adjusted " << to_decimal(r.adjusted, 5) << '\n'
            << "for degree > " << r.degree_threshold.str() << '\n';
}

struct CapArgs {
  std::uint64_t m = 0;
  unsigned l = 0;
  std::string variant;
};

void run_cap(const Globals&, const CapArgs& a, Outcome& out) {
  std::string name = a.variant;
  bool c0 = false;
  if (name.size() > 3 && name.ends_with("-c0")) {
    c0 = true;
    name.resize(name.size() - 3);
  }
  auto kind = parse_variant_kind(name);
  CapResult cap;
  unsigned l = a.l;
  if (a.l) {
    if (c0) throw Error("with --l the C_0 choice follows from l; pass the plain variant name");
    cap = closed_form_cap_for_l(kind, a.l);
  } else {
    if (a.m == 0) throw Error("give --m or --l");
    Variant v = kind == VariantKind::CyclicGalois ? Variant::cyclic(c0)
                : kind == VariantKind::AbelianGalois ? Variant::abelian(c0)
                                                     : Variant::unrestricted(c0);
    cap = closed_form_cap(static_cast<unsigned>(a.m), v);
    l = v.l_for(static_cast<unsigned>(a.m));
  }
  out.records.push_back(Json{{"variant", a.variant},
                             {"l", l},
                             {"cap", to_fraction(cap.cap)},
                             {"g_a", to_fraction(cap.g_a)},
                             {"g_b", to_fraction(cap.g_b)},
                             {"g_c", to_fraction(cap.g_c)}});
  out.csv_header = "variant,l,cap,g_a,g_b,g_c";
  out.csv_rows.push_back(a.variant + "," + std::to_string(l) + "," + to_fraction(cap.cap) + "," +
                         to_fraction(cap.g_a) + "," + to_fraction(cap.g_b) + "," + to_fraction(cap.g_c));
  out.table << to_fraction(cap.cap) << " (" << to_decimal(cap.cap, 3) << "), l=" << l << ", optimum at |U|="
            << to_fraction(cap.g_a) << " |V|=" << to_fraction(cap.g_b) << " |W|=" << to_fraction(cap.g_c) << '\n';
}

struct ConstructionArgs {
  std::string id;
  std::uint64_t p = 0;
};

Construction parse_construction(const std::string& id) {
  if (id == "MSS-circulant") return Construction::MssCirculant;
  if (id == "Vetrik") return Construction::Vetrik;
  if (id == "MSS-abelian") return Construction::MssAbelian;
  throw Error("unknown construction '" + id + "' (MSS-circulant, Vetrik, MSS-abelian)");
}

void run_construction(const Globals&, const ConstructionArgs& a, Outcome& out) {
  auto c = parse_construction(a.id);
  auto r = construction_order(c, a.p);
  out.records.push_back(Json{{"id", a.id}, {"p", r.p}, {"degree", r.degree}, {"order", r.order}});
  out.csv_header = "id,p,degree,order";
  out.csv_rows.push_back(a.id + "," + std::to_string(r.p) + "," + std::to_string(r.degree) + "," +
                         std::to_string(r.order));
  out.table << a.id << " p=" << r.p << ": degree " << r.degree << ", order " << r.order << '\n';
}

void run_coefficient(const Globals&, std::uint64_t n, std::uint64_t l, Outcome& out) {
  auto c = quadratic_coefficient(n, l);
  out.records.push_back(Json{{"n", n}, {"l", l}, {"coefficient", to_fraction(c.value)}, {"decimal", c.decimal}});
  out.csv_header = "n,l,coefficient_num,coefficient_den";
  out.csv_rows.push_back(std::to_string(n) + "," + std::to_string(l) + "," + numerator(c.value).str() + "," +
                         denominator(c.value).str());
  out.table << to_fraction(c.value) << " (" << c.decimal << ")\n";
}

void run_uac(const Globals&, std::uint64_t s, std::uint64_t t, Outcome& out) {
  auto c = uac_coefficient(s, t);
  out.records.push_back(Json{{"s", s}, {"t", t}, {"coefficient", to_fraction(c)}});
  out.csv_header = "s,t,coefficient";
  out.csv_rows.push_back(std::to_string(s) + "," + std::to_string(t) + "," + to_fraction(c));
  out.table << to_fraction(c) << " (" << to_decimal(c, 5) << ")\n";
}

// --- fit ------------------------------------------------------------------

void run_fit(const Globals&, const std::string& path, Outcome& out) {
  auto records = read_catalog(path);
  auto fit = quadratic_fit(records);
  Json rec{{"records", records.size()},
           {"a", to_fraction(fit.a)},
           {"b", to_fraction(fit.b)},
           {"c", to_fraction(fit.c)},
           {"a_decimal", to_decimal(fit.a, 6)},
           {"b_decimal", to_decimal(fit.b, 6)},
           {"c_decimal", to_decimal(fit.c, 6)},
           {"residual", to_fraction(fit.residual)},
           {"residual_decimal", to_decimal(fit.residual, 6)}};
  out.records.push_back(rec);
  out.csv_header = "a,b,c,residual";
  out.csv_rows.push_back(to_decimal(fit.a, 6) + "," + to_decimal(fit.b, 6) + "," + to_decimal(fit.c, 6) + "," +
                         to_decimal(fit.residual, 6));
  out.table << "n = a d^2 + b d + c over " << records.size() << " records\n"
            << "a " << to_decimal(fit.a, 6) << " (" << to_decimal(fit.a, 3) << ")\n"
            << "b " << to_decimal(fit.b, 6) << " (" << to_decimal(fit.b, 3) << ")\n"
            << "c " << to_decimal(fit.c, 6) << " (" << to_decimal(fit.c, 2) << ")\n"
            << "residual " << to_decimal(fit.residual, 6) << '\n';
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"ddx2: diameter-2 circulant and Abelian Cayley graph toolkit"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--format", g.format, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}));
  app.add_option("--output", g.output, "write NDJSON results here, plus a .manifest.json sidecar");
  app.add_option("--jobs", g.jobs, "worker threads (default: DDX2_JOBS or all cores)")->check(CLI::PositiveNumber);
  app.add_option("--time-budget", g.time_budget, "wall-clock limit in seconds")->check(CLI::NonNegativeNumber);

  std::function<void(Outcome&)> action;
  std::string command;
  std::map<std::string, std::string> params;
  auto remember = [&](CLI::App* sub) {
    command = sub->get_parent()->get_parent() ? sub->get_parent()->get_name() + " " + sub->get_name() : sub->get_name();
  };

  // verify
  auto* verify = app.add_subcommand("verify", "check that a connection set gives diameter 2");
  verify->require_subcommand(1);

  VerifyCirculantArgs vc;
  auto* v_circ = verify->add_subcommand("circulant", "circulant on Z_n from generators and their negatives");
  v_circ->add_option("--n", vc.n)->required();
  v_circ->add_option("--gens", vc.gens)->required()->delimiter(',');
  v_circ->add_flag("--self-inverse", vc.self_inverse, "also include n/2");
  v_circ->callback([&] {
    remember(v_circ);
    params = {{"n", std::to_string(vc.n)}, {"gens", join(vc.gens)}, {"self_inverse", vc.self_inverse ? "1" : "0"}};
    action = [&](Outcome& o) { run_verify_circulant(g, vc, o); };
  });

  VerifyFamilyArgs vf;
  auto* v_fam = verify->add_subcommand("family", "assemble a subscript family and check the product group");
  v_fam->add_option("--variant", vf.variant)->required()->check(CLI::IsMember({"cyclic", "abelian", "unrestricted"}));
  v_fam->add_option("--n", vf.n)->required();
  v_fam->add_option("--U", vf.U)->delimiter(',');
  v_fam->add_option("--V", vf.V)->delimiter(',');
  v_fam->add_option("--W", vf.W)->delimiter(',');
  v_fam->add_option("--p", vf.p, "field prime (cyclic, abelian)");
  v_fam->add_option("--s", vf.s, "Z_s factor (unrestricted)");
  v_fam->add_option("--t", vf.t, "Z_t factor (unrestricted)");
  v_fam->add_option("--budget", vf.budget, "extra inverse pairs allowed")->check(CLI::Range(0, 6));
  v_fam->callback([&] {
    remember(v_fam);
    params = {{"variant", vf.variant}, {"n", std::to_string(vf.n)}, {"U", join(vf.U)}, {"V", join(vf.V)},
              {"W", join(vf.W)},       {"p", std::to_string(vf.p)}, {"s", std::to_string(vf.s)},
              {"t", std::to_string(vf.t)}, {"budget", std::to_string(vf.budget)}};
    action = [&](Outcome& o) { run_verify_family(g, vf, o); };
  });

  std::string catalog_path;
  auto* v_cat = verify->add_subcommand("catalog", "verify every record of an NDJSON catalog");
  v_cat->add_option("file", catalog_path)->required()->check(CLI::ExistingFile);
  v_cat->callback([&] {
    remember(v_cat);
    params = {{"file", catalog_path}};
    action = [&](Outcome& o) { run_verify_catalog(g, catalog_path, o); };
  });

  // search
  auto* search = app.add_subcommand("search", "exhaustive searches");
  search->require_subcommand(1);

  SearchFamilyArgs sf;
  auto* s_fam = search->add_subcommand("family", "largest n with a covering subscript family");
  s_fam->add_option("--l", sf.l)->required()->check(CLI::Range(3u, 64u));
  s_fam->add_option("--variant", sf.variant)->required()->check(CLI::IsMember({"cyclic", "abelian", "unrestricted"}));
  s_fam->add_option("--n-start", sf.n_start, "first n to try (default: the closed-form cap)");
  s_fam->add_flag("--perfect", sf.perfect, "only accept families that reach each residue exactly once");
  s_fam->callback([&] {
    remember(s_fam);
    params = {{"l", std::to_string(sf.l)}, {"variant", sf.variant}, {"n_start", std::to_string(sf.n_start)},
              {"perfect", sf.perfect ? "true" : "false"}};
    action = [&](Outcome& o) { run_search_family(g, sf, o); };
  });

  SearchExtremalArgs se;
  auto* s_ext = search->add_subcommand("extremal", "largest diameter-2 circulant of degree d");
  s_ext->add_option("--d", se.d)->required()->check(CLI::Range(2u, 64u));
  s_ext->add_option("--n-max", se.n_max, "first n to try (default: mac_upper(d, 2))");
  s_ext->callback([&] {
    remember(s_ext);
    if (se.n_max == 0) se.n_max = static_cast<std::uint64_t>(ddx2::mac_upper(se.d, 2));
    params = {{"d", std::to_string(se.d)}, {"n_max", std::to_string(se.n_max)}};
    action = [&](Outcome& o) { run_search_extremal(g, se, o); };
  });

  // bounds
  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "closed-form bounds and coefficients");
  bounds->require_subcommand(0, 1);
  auto* b_d = bounds->add_option("--d", ba.d, "degree")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 20));
  bounds->add_option("--k", ba.k, "diameter")->check(CLI::Range(1u, 64u));
  bounds->add_option("--delta", ba.delta, "lower-bound constants for d mod 4 = 0..3, '?' if unknown")
      ->delimiter(',');

  CullinanHajirArgs ch;
  auto* b_ch = bounds->add_subcommand("cullinan-hajir", "all-degree coefficient from a prime-interval triple");
  b_ch->add_option("--base", ch.base)->required();
  b_ch->add_option("--epsilon", ch.epsilon)->required();
  b_ch->add_option("--k", ch.k, "congruence modulus");
  b_ch->add_option("--x0", ch.x0, "threshold as MANTISSAeEXPONENT");
  b_ch->add_option("--multiplier", ch.multiplier, "degree per prime");
  b_ch->callback([&] {
    remember(b_ch);
    params = {{"base", ch.base}, {"epsilon", ch.epsilon}, {"k", std::to_string(ch.k)}, {"x0", ch.x0},
              {"multiplier", std::to_string(ch.multiplier)}};
    action = [&](Outcome& o) { run_cullinan_hajir(g, ch, o); };
  });

  CapArgs ca;
  auto* b_cap = bounds->add_subcommand("cap", "real-valued cap on n for a family size");
  b_cap->add_option("--m", ca.m);
  b_cap->add_option("--l", ca.l);
  b_cap->add_option("--variant", ca.variant, "cyclic, abelian or unrestricted, with -c0 when giving --m")->required();
  b_cap->callback([&] {
    remember(b_cap);
    params = {{"m", std::to_string(ca.m)}, {"l", std::to_string(ca.l)}, {"variant", ca.variant}};
    action = [&](Outcome& o) { run_cap(g, ca, o); };
  });

  ConstructionArgs co;
  auto* b_con = bounds->add_subcommand("construction", "degree and order of a known construction at prime p");
  b_con->add_option("--id", co.id)->required();
  b_con->add_option("--p", co.p)->required();
  b_con->callback([&] {
    remember(b_con);
    params = {{"id", co.id}, {"p", std::to_string(co.p)}};
    action = [&](Outcome& o) { run_construction(g, co, o); };
  });

  std::uint64_t coef_n = 0, coef_l = 0;
  auto* b_coef = bounds->add_subcommand("coefficient", "n / l^2");
  b_coef->add_option("--n", coef_n)->required();
  b_coef->add_option("--l", coef_l)->required()->check(CLI::PositiveNumber);
  b_coef->callback([&] {
    remember(b_coef);
    params = {{"n", std::to_string(coef_n)}, {"l", std::to_string(coef_l)}};
    action = [&](Outcome& o) { run_coefficient(g, coef_n, coef_l, o); };
  });

  std::uint64_t uac_s = 0, uac_t = 0;
  auto* b_uac = bounds->add_subcommand("uac", "st / (s + t)^2");
  b_uac->add_option("--s", uac_s)->required()->check(CLI::PositiveNumber);
  b_uac->add_option("--t", uac_t)->required()->check(CLI::PositiveNumber);
  b_uac->callback([&] {
    remember(b_uac);
    params = {{"s", std::to_string(uac_s)}, {"t", std::to_string(uac_t)}};
    action = [&](Outcome& o) { run_uac(g, uac_s, uac_t, o); };
  });

  bounds->callback([&] {
    if (bounds->get_subcommands().empty()) {
      if (b_d->count() == 0) throw CLI::RequiredError("--d");
      command = "bounds";
      params = {{"d", std::to_string(ba.d)}, {"k", std::to_string(ba.k)}, {"delta", [&] {
                   std::string s;
                   for (auto& x : ba.delta) s += (s.empty() ? "" : ",") + x;
                   return s;
                 }()}};
      action = [&](Outcome& o) { run_bounds(g, ba, o); };
    }
  });

  // fit
  std::string fit_path;
  auto* fit = app.add_subcommand("fit", "least-squares quadratic through a catalog's (d, n) pairs");
  fit->add_option("file", fit_path)->required()->check(CLI::ExistingFile);
  fit->callback([&] {
    command = "fit";
    params = {{"file", fit_path}};
    action = [&](Outcome& o) { run_fit(g, fit_path, o); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  if (!action) {
    std::cerr << "nothing to do\n";
    return kUsage;
  }

  const std::string started = utc_timestamp();
  Outcome out;
  try {
    action(out);
  } catch (const ddx2::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  params["jobs"] = std::to_string(g.jobs);
  if (g.time_budget >= 0) params["time_budget"] = std::to_string(g.time_budget);
  try {
    emit(g, out, command, params, started);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return out.code;
}
