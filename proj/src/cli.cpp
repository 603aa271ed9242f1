#include "logflat/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "logflat/chart.hpp"
#include "logflat/descent.hpp"
#include "logflat/error.hpp"
#include "logflat/graded.hpp"
#include "logflat/lift.hpp"
#include "logflat/monmod.hpp"
#include "logflat/morphism.hpp"
#include "logflat/toric.hpp"

#ifndef LOGFLAT_GALLERY_DIR
#define LOGFLAT_GALLERY_DIR "gallery"
#endif
#ifndef LOGFLAT_GOLDEN_DIR
#define LOGFLAT_GOLDEN_DIR "tests/golden"
#endif

namespace logflat::cli {

namespace {

// ---- schema ----

enum class Ref { Monoid, Hom, MonoidModule, Ring, Module, Grading, Chart, Gluing, Datum, LiftProblem };

struct FieldSpec {
  std::string key;
  std::optional<Ref> ref;
  bool required = true;
};

struct KindSpec {
  std::vector<FieldSpec> fields;
  std::vector<std::vector<std::string>> one_of;  // at least one key of each group
};

const std::map<std::string, Ref>& object_kinds() {
  static const std::map<std::string, Ref> kinds{
      {"monoid", Ref::Monoid},         {"monoid_hom", Ref::Hom},      {"module_over_monoid", Ref::MonoidModule},
      {"ring", Ref::Ring},             {"module", Ref::Module},       {"grading", Ref::Grading},
      {"chart", Ref::Chart},           {"gluing", Ref::Gluing},       {"descent_datum", Ref::Datum},
      {"lift_problem", Ref::LiftProblem}};
  return kinds;
}

const std::map<std::string, KindSpec>& object_specs() {
  static const std::map<std::string, KindSpec> specs{
      {"monoid", {{}, {{"generators", "free"}}}},
      {"monoid_hom", {{{"source", Ref::Monoid}, {"target", Ref::Monoid}, {"images", {}}}, {}}},
      {"module_over_monoid", {{{"monoid", Ref::Monoid}}, {}}},
      {"ring", {{{"toric", Ref::Monoid, false}}, {{"vars", "toric"}}}},
      {"module", {{{"ring", Ref::Ring}, {"sum", {}, false}}, {{"rank", "ideal", "sum"}}}},
      {"grading", {{{"shape", {}}, {"ring", Ref::Ring, false}, {"base", Ref::Ring, false}}, {}}},
      {"chart",
       {{{"h", Ref::Hom, false}, {"a", Ref::Ring, false}, {"c", Ref::Ring, false}}, {{"preset", "h"}}}},
      {"gluing",
       {{{"c1", Ref::Ring, false}, {"c2", Ref::Ring, false}, {"c0", Ref::Ring, false}}, {{"preset", "c1"}}}},
      {"descent_datum",
       {{{"gluing", Ref::Gluing}, {"m1", Ref::Module}, {"m2", Ref::Module}, {"phi", {}}}, {}}},
      {"lift_problem",
       {{{"thick", Ref::Ring},
         {"ideal", {}},
         {"chart", Ref::Monoid},
         {"h", Ref::Hom},
         {"a", {}},
         {"b", {}},
         {"eta", {}}},
        {}}},
  };
  return specs;
}

const std::map<std::string, KindSpec>& task_specs() {
  static const std::map<std::string, KindSpec> specs{
      {"classify", {{{"hom", Ref::Hom}}, {}}},
      {"primes", {{{"monoid", Ref::Monoid}}, {}}},
      {"flat", {{{"module", Ref::MonoidModule}}, {}}},
      {"basis", {{{"module", Ref::MonoidModule}}, {}}},
      {"graded_flat", {{{"module", Ref::Module}, {"grading", Ref::Grading}}, {}}},
      {"nodal_panel", {{{"module", Ref::Module}}, {}}},
      {"log_flat_point", {{{"module", Ref::Module}}, {}}},
      {"chart_criterion", {{{"chart", Ref::Chart}, {"module", Ref::Module}}, {}}},
      {"chart_invariance",
       {{{"chart", Ref::Chart}, {"other", Ref::Chart}, {"module", Ref::Module}, {"map", {}}}, {}}},
      {"lift", {{{"problem", Ref::LiftProblem}}, {}}},
      {"glue", {{{"gluing", Ref::Gluing}}, {}}},
      {"descend", {{{"datum", Ref::Datum}}, {}}},
      {"roundtrip",
       {{{"datum", Ref::Datum, false}, {"module", Ref::Module, false}, {"gluing", Ref::Gluing, false}},
        {{"datum", "module"}}}},
  };
  return specs;
}

[[noreturn]] void invalid(const std::string& where, const std::string& what) {
  fail(ErrorCode::Validation, where + ": " + what);
}

// "name" or "name.part" for rings carried by charts, gluings and gradings.
std::pair<std::string, std::string> split_ref(const std::string& s) {
  auto dot = s.find('.');
  if (dot == std::string::npos) return {s, ""};
  return {s.substr(0, dot), s.substr(dot + 1)};
}

bool ring_part_ok(const std::string& kind, const std::string& part) {
  if (kind == "ring") return part.empty();
  if (kind == "chart") return part.empty() || part == "a" || part == "c";
  if (kind == "gluing") return part.empty() || part == "c" || part == "c1" || part == "c2" || part == "c0";
  if (kind == "grading") return part.empty() || part == "ring";
  return false;
}

bool kind_matches(Ref want, const std::string& kind) {
  if (want == Ref::Ring) return kind == "ring" || kind == "chart" || kind == "gluing" || kind == "grading";
  return object_kinds().at(kind) == want;
}

void check_fields(const Json& item, const KindSpec& spec, const std::map<std::string, std::string>& kinds,
                  const std::string& where) {
  for (const auto& group : spec.one_of) {
    bool any = false;
    for (const auto& k : group) any = any || item.contains(k);
    if (!any) {
      std::string keys;
      for (const auto& k : group) keys += (keys.empty() ? "" : " or ") + k;
      invalid(where, "missing field " + keys);
    }
  }
  for (const auto& f : spec.fields) {
    if (!item.contains(f.key)) {
      if (f.required) invalid(where, "missing field " + f.key);
      continue;
    }
    if (!f.ref) continue;
    std::vector<std::string> names;
    if (item[f.key].is_string()) {
      names.push_back(item[f.key].get<std::string>());
    } else if (item[f.key].is_array()) {
      for (const auto& n : item[f.key]) {
        if (!n.is_string()) invalid(where, "field " + f.key + " must hold object names");
        names.push_back(n.get<std::string>());
      }
    } else {
      invalid(where, "field " + f.key + " must name an object");
    }
    for (const auto& full : names) {
      auto [name, part] = split_ref(full);
      auto it = kinds.find(name);
      if (it == kinds.end()) invalid(where, "unresolved reference '" + full + "' in field " + f.key);
      if (!kind_matches(*f.ref, it->second) || (*f.ref == Ref::Ring && !ring_part_ok(it->second, part)) ||
          (*f.ref != Ref::Ring && !part.empty()))
        invalid(where, "field " + f.key + " cannot refer to '" + full + "' of kind " + it->second);
    }
  }
}

// ---- values ----

IntVec ints(const Json& j) {
  if (!j.is_array()) fail(ErrorCode::Validation, "expected an integer vector");
  IntVec v;
  for (const auto& x : j) {
    if (x.is_number_integer()) {
      v.push_back(mpz_class(std::to_string(x.get<long long>())));
    } else if (x.is_string()) {
      v.push_back(mpz_class(x.get<std::string>()));
    } else {
      fail(ErrorCode::Validation, "expected an integer");
    }
  }
  return v;
}

std::vector<IntVec> int_vecs(const Json& j) {
  std::vector<IntVec> out;
  for (const auto& x : j) out.push_back(ints(x));
  return out;
}

Json to_json(const IntVec& v) {
  Json out = Json::array();
  for (const auto& x : v) {
    if (x.fits_slong_p()) {
      out.push_back(x.get_si());
    } else {
      out.push_back(x.get_str());
    }
  }
  return out;
}

std::vector<Poly> polys(const RingPresentation& r, const Json& j) {
  std::vector<Poly> out;
  for (const auto& s : j) {
    if (!s.is_string()) fail(ErrorCode::Validation, "polynomials are given as strings");
    out.push_back(r.parse(s.get<std::string>()));
  }
  return out;
}

Json vec_json(const PolyVec& v) {
  Json out = Json::array();
  for (const auto& p : v) out.push_back(p.to_string());
  return out;
}

Json module_json(const ModulePresentation& m) {
  Json rel = Json::array();
  for (const auto& v : m.relations()) rel.push_back(vec_json(v));
  Json out{{"ring", m.ring().to_string()}, {"rank", m.rank()}, {"relations", rel}};
  auto d = m.vector_space_dim();
  out["dim"] = d ? Json(*d) : Json(nullptr);
  return out;
}

Json certificate_json(const Certificate& c) {
  Json children = Json::array();
  for (const auto& ch : c.children) children.push_back(certificate_json(ch));
  Json out{{"criterion", c.criterion}, {"holds", c.holds}, {"detail", c.detail}};
  if (!children.empty()) out["children"] = children;
  return out;
}

Field parse_field(const std::string& s) {
  if (s == "q" || s == "Q") return Field::rationals();
  if (s.rfind("fp:", 0) == 0) {
    unsigned long p = 0;
    try {
      p = std::stoul(s.substr(3));
    } catch (const std::exception&) {
      fail(ErrorCode::Validation, "bad field " + s);
    }
    if (p < 2) fail(ErrorCode::Validation, "bad field " + s);
    for (unsigned long d = 2; d * d <= p; ++d)
      if (p % d == 0) fail(ErrorCode::Validation, "field characteristic must be prime: " + s);
    return Field::prime(p);
  }
  fail(ErrorCode::Validation, "unknown field " + s + " (use q or fp:<prime>)");
}

std::string field_flag(const Field& k) {
  return k.is_rational() ? "q" : "fp:" + std::to_string(k.characteristic());
}

// ---- lazily built objects ----

class Env {
 public:
  Env(const Json& problem, Field field) : field_(field) {
    for (const auto& o : problem.value("objects", Json::array())) decls_[o["name"].get<std::string>()] = o;
  }

  const Field& field() const { return field_; }
  const Json& decl(const std::string& name) const { return decls_.at(name); }
  std::string kind(const std::string& name) const { return decls_.at(name)["kind"].get<std::string>(); }

  FineMonoid monoid(const std::string& name) {
    return cached(monoids_, name, [&](const Json& o) {
      if (o.contains("free")) return FineMonoid::free_monoid(o["free"].get<std::size_t>());
      std::vector<IntVec> gens = int_vecs(o["generators"]);
      FgAbGroup g;
      if (o.contains("group")) {
        const Json& gj = o["group"];
        std::vector<mpz_class> torsion;
        if (gj.contains("torsion"))
          for (const auto& t : ints(gj["torsion"])) torsion.push_back(t);
        g = FgAbGroup(gj.value("rank", std::size_t{0}), torsion);
      } else {
        if (gens.empty()) fail(ErrorCode::Validation, "monoid " + name + " needs a group or generators");
        g = FgAbGroup::free(gens.front().size());
      }
      return FineMonoid(g, gens);
    });
  }

  MonoidHom hom(const std::string& name) {
    return cached(homs_, name, [&](const Json& o) {
      return MonoidHom(monoid(o["source"]), monoid(o["target"]), int_vecs(o["images"]));
    });
  }

  PModule monoid_module(const std::string& name) {
    return cached(pmods_, name, [&](const Json& o) {
      FineMonoid p = monoid(o["monoid"]);
      std::string type = o.value("type", std::string("embedded"));
      if (type == "free") return PModule::free(p, o.value("rank", std::size_t{1}));
      if (type == "ideal") return PModule::ideal(MonoidIdeal(p, int_vecs(o["generators"])));
      if (type == "localization") return PModule::localization(localize(p, int_vecs(o["localize"])));
      if (type != "embedded") fail(ErrorCode::Validation, "unknown module type " + type);
      std::vector<ModElem> gens;
      for (const auto& g : o["generators"]) {
        if (g.is_array()) {
          gens.push_back({ints(g), 0});
        } else {
          gens.push_back({ints(g["g"]), g.value("comp", std::size_t{0})});
        }
      }
      return PModule(p, o.value("components", std::size_t{1}), gens);
    });
  }

  ToricAlgebra toric(const std::string& name) {
    return cached(torics_, name, [&](const Json& o) {
      std::vector<std::string> names;
      if (o.contains("names")) names = o["names"].get<std::vector<std::string>>();
      return toric_ideal(monoid(o["toric"]), names, o.value("allow_units", false), field_);
    });
  }

  RingPresentation ring(const std::string& full) {
    auto [name, part] = split_ref(full);
    const std::string k = kind(name);
    if (k == "chart") return part == "a" ? chart(name).a : chart(name).c;
    if (k == "gluing") {
      const GluingDatum& g = gluing(name);
      if (part == "c1") return g.c1;
      if (part == "c2") return g.c2;
      if (part == "c0") return g.c0;
      return g.c;
    }
    if (k == "grading") return grading(name).ring;
    if (decl(name).contains("toric")) return toric(name).ring;
    return cached(rings_, name, [&](const Json& o) {
      PolyRing r(field_, o["vars"].get<std::vector<std::string>>());
      RingPresentation free(r);
      return RingPresentation(r, o.contains("relations") ? polys(free, o["relations"]) : std::vector<Poly>{});
    });
  }

  ModulePresentation module(const std::string& name) {
    return cached(modules_, name, [&](const Json& o) {
      RingPresentation r = ring(o["ring"]);
      if (o.contains("sum")) {
        std::optional<ModulePresentation> acc;
        for (const auto& part : o["sum"]) {
          ModulePresentation m = module(part.get<std::string>());
          if (m.ring().ambient() != r.ambient()) fail(ErrorCode::Validation, "summand over another ring in " + name);
          acc = acc ? acc->direct_sum(m) : m;
        }
        return acc ? *acc : ModulePresentation(r, 0);
      }
      if (o.contains("ideal")) return ModulePresentation::cyclic(r, polys(r, o["ideal"]));
      std::size_t rank = o["rank"].get<std::size_t>();
      std::vector<PolyVec> rel;
      if (o.contains("relations"))
        for (const auto& col : o["relations"]) {
          PolyVec v = polys(r, col);
          if (v.size() != rank) fail(ErrorCode::Validation, "relation of the wrong length in " + name);
          rel.push_back(v);
        }
      return ModulePresentation(r, rank, rel);
    });
  }

  struct Grading {
    GradedStructure structure;
    RingPresentation ring;
  };

  const Grading& grading(const std::string& name) {
    return cached_ref(gradings_, name, [&](const Json& o) {
      const std::string shape = o["shape"].get<std::string>();
      Grading g;
      if (shape == "monoid") {
        const std::string rn = o["ring"].get<std::string>();
        if (kind(rn) != "ring" || !decl(rn).contains("toric"))
          fail(ErrorCode::Validation, "monoid grading needs a toric ring");
        ToricAlgebra kp = toric(rn);
        g.structure.kind = ShapeKind::MonoidAlgebra;
        g.structure.monoid_algebra = kp;
        g.structure.grading = GradedRing::of(kp);
        g.ring = kp.ring;
      } else if (shape == "nodal") {
        g.ring = ring(o["ring"]);
        g.structure.kind = ShapeKind::Chart;
        g.structure.chart = nodal_shape(g.ring);
      } else if (shape == "group_algebra") {
        RingPresentation base = ring(o["base"]);
        std::optional<std::size_t> var;
        if (base.ambient().nvars() == 1) var = 0;
        GroupAlgebra ga = group_algebra(base, o.value("rank", std::size_t{1}), var);
        g.structure.kind = ShapeKind::GroupAlgebra;
        g.structure.group_algebra = ga;
        g.ring = ga.ring.ring();
      } else if (shape == "trivial") {
        g.ring = ring(o["ring"]);
        g.structure.kind = ShapeKind::TrivialGrading;
        g.structure.trivial = g.ring;
      } else {
        fail(ErrorCode::Validation, "unknown grading shape " + shape);
      }
      return g;
    });
  }

  const ChartData& chart(const std::string& name) {
    return cached_ref(charts_, name, [&](const Json& o) {
      if (o.contains("preset")) {
        const std::string p = o["preset"].get<std::string>();
        if (p == "nodal") return nodal_chart(field_);
        if (p == "nodal-unit-extension") return nodal_unit_extension_chart(field_);
        if (p == "smooth-divisor") return smooth_divisor_chart(field_);
        if (p == "nodal-family") return nodal_family_chart(field_);
        fail(ErrorCode::Validation, "unknown chart preset " + p);
      }
      RingPresentation a = ring(o["a"]), c = ring(o["c"]);
      std::vector<std::string> names;
      if (o.contains("p_names")) names = o["p_names"].get<std::vector<std::string>>();
      ChartData d{hom(o["h"]), a, c, polys(a, o["t"]), polys(c, o["b"]), RingMap(a, c, polys(c, o["f"])), names};
      validate_chart(d);
      return d;
    });
  }

  const GluingDatum& gluing(const std::string& name) {
    return cached_ref(gluings_, name, [&](const Json& o) {
      if (o.contains("preset")) {
        if (o["preset"] != "nodal") fail(ErrorCode::Validation, "unknown gluing preset");
        return nodal_gluing(field_);
      }
      RingPresentation c1 = ring(o["c1"]), c2 = ring(o["c2"]), c0 = ring(o["c0"]);
      return fiber_product_ring(c1, c2, c0, RingMap(c1, c0, polys(c0, o["f1"])), RingMap(c2, c0, polys(c0, o["f2"])));
    });
  }

  const DescentDatum& datum(const std::string& name) {
    return cached_ref(data_, name, [&](const Json& o) {
      const GluingDatum& g = gluing(o["gluing"]);
      std::vector<PolyVec> phi;
      for (const auto& col : o["phi"]) phi.push_back(polys(g.c0, col));
      return make_descent_datum(g, module(o["m1"]), module(o["m2"]), phi);
    });
  }

  const HomotopyProblem& lift_problem(const std::string& name) {
    return cached_ref(lifts_, name, [&](const Json& o) {
      RingPresentation thick = ring(o["thick"]);
      SquareZeroExtension ext(thick, polys(thick, o["ideal"]));
      auto elems = [&](const Json& list) {
        std::vector<LogElem> out;
        for (const auto& e : list) out.push_back({ints(e["r"]), thick.parse(e["u"].get<std::string>())});
        return out;
      };
      return HomotopyProblem{ext, monoid(o["chart"]), hom(o["h"]), elems(o["a"]), elems(o["b"]), polys(thick, o["eta"])};
    });
  }

 private:
  template <class T, class F>
  T cached(std::map<std::string, T>& cache, const std::string& name, F build) {
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
    guard(name);
    T v = build(decls_.at(name));
    building_.erase(name);
    return cache.emplace(name, std::move(v)).first->second;
  }

  template <class T, class F>
  const T& cached_ref(std::map<std::string, std::shared_ptr<T>>& cache, const std::string& name, F build) {
    auto it = cache.find(name);
    if (it != cache.end()) return *it->second;
    guard(name);
    auto v = std::make_shared<T>(build(decls_.at(name)));
    building_.erase(name);
    return *cache.emplace(name, std::move(v)).first->second;
  }

  void guard(const std::string& name) {
    if (!building_.insert(name).second) fail(ErrorCode::Validation, "cyclic reference through " + name);
  }

  Field field_;
  std::map<std::string, Json> decls_;
  std::set<std::string> building_;
  std::map<std::string, FineMonoid> monoids_;
  std::map<std::string, MonoidHom> homs_;
  std::map<std::string, PModule> pmods_;
  std::map<std::string, ToricAlgebra> torics_;
  std::map<std::string, RingPresentation> rings_;
  std::map<std::string, ModulePresentation> modules_;
  std::map<std::string, std::shared_ptr<Grading>> gradings_;
  std::map<std::string, std::shared_ptr<ChartData>> charts_;
  std::map<std::string, std::shared_ptr<GluingDatum>> gluings_;
  std::map<std::string, std::shared_ptr<DescentDatum>> data_;
  std::map<std::string, std::shared_ptr<HomotopyProblem>> lifts_;
};

// ---- tasks ----

Json elem_json(const ModElem& e) { return Json{{"g", to_json(e.g)}, {"comp", e.comp}}; }

Json pair_json(const std::optional<std::pair<std::size_t, std::size_t>>& w) {
  if (!w) return nullptr;
  return Json::array({w->first, w->second});
}

Json ideal_json(const MonoidIdeal& i) {
  Json gens = Json::array();
  for (const auto& g : i.generators()) gens.push_back(to_json(g));
  return gens;
}

Json task_classify(Env& env, const Json& t) {
  Classification c = classify_morphism(env.hom(t["hom"]));
  Json out{{"injective", c.injective}, {"strict", c.strict},     {"vertical", c.vertical},
           {"flat", tri_name(c.flat)}, {"free", tri_name(c.free)}, {"rule", c.rule}};
  out["witness"] = c.witness;
  if (c.basis) out["basis"] = c.basis->description;
  return out;
}

Json task_primes(Env& env, const Json& t) {
  Json list = Json::array();
  for (const auto& p : prime_ideals(env.monoid(t["monoid"]))) {
    Json mask = Json::array();
    for (bool b : p.face.mask) mask.push_back(b);
    list.push_back(Json{{"generators", ideal_json(p.ideal)}, {"face", mask}, {"face_dimension", p.face.dimension}});
  }
  return Json{{"count", list.size()}, {"primes", list}};
}

Json task_flat(Env& env, const Json& t) {
  FlatVerdict v = is_flat(env.monoid_module(t["module"]));
  return Json{{"flat", v.flat}, {"witness", pair_json(v.witness)}};
}

Json task_basis(Env& env, const Json& t, std::size_t window) {
  BasisResult b = extract_basis(env.monoid_module(t["module"]), t.value("window", window));
  Json out{{"found", b.basis.has_value()}};
  if (b.basis) {
    Json list = Json::array();
    for (const auto& e : *b.basis) list.push_back(elem_json(e));
    out["basis"] = list;
  }
  out["witness"] = pair_json(b.witness);
  out["window_checked"] = b.window_checked;
  return out;
}

Json task_graded_flat(Env& env, const Json& t) {
  const Env::Grading& g = env.grading(t["grading"]);
  ModulePresentation m = env.module(t["module"]);
  std::optional<GradedModule> graded;
  if (g.structure.kind == ShapeKind::GroupAlgebra) {
    const Json& md = env.decl(t["module"]);
    if (!md.contains("shifts")) fail(ErrorCode::Validation, "group-algebra modules need shifts");
    graded.emplace(g.structure.group_algebra->ring, int_vecs(md["shifts"]), m.relations());
  }
  GradedVerdict v = graded_flat(g.structure, m, graded);
  return Json{{"shape", shape_name(g.structure.kind)}, {"flat", v.flat}, {"certificate", certificate_json(v.certificate)}};
}

Json task_nodal_panel(Env& env, const Json& t) {
  NodalPanel p = nodal_criteria_panel(env.module(t["module"]));
  Json entries = Json::array();
  for (std::size_t i = 0; i < p.entries.size(); ++i)
    entries.push_back(Json{{"label", p.labels[i]}, {"holds", p.entries[i]}});
  return Json{{"entries", entries}, {"all_agree", p.all_agree()}};
}

Json task_log_flat_point(Env& env, const Json& t) {
  const std::string mname = t["module"].get<std::string>();
  const std::string rname = env.decl(mname)["ring"].get<std::string>();
  if (env.kind(rname) != "ring" || !env.decl(rname).contains("toric"))
    fail(ErrorCode::Validation, "log_flat_point needs a module over a toric ring");
  PointVerdict v = log_flat_over_point(env.toric(rname), env.module(mname));
  Json primes = Json::array();
  for (const auto& p : v.primes) {
    Json dim = p.tor.dim ? Json(*p.tor.dim) : Json(nullptr);
    primes.push_back(Json{{"prime", ideal_json(p.prime)}, {"tor_zero", p.tor.is_zero}, {"tor_dim", dim}});
  }
  return Json{{"log_flat", v.log_flat}, {"primes", primes}};
}

Json task_chart_criterion(Env& env, const Json& t) {
  ChartVerdict v = second_chart_criterion(env.chart(t["chart"]), env.module(t["module"]));
  return Json{{"log_flat", v.log_flat}, {"shape", v.shape}, {"certificate", certificate_json(v.certificate)}};
}

Json task_chart_invariance(Env& env, const Json& t) {
  const ChartData& a = env.chart(t["chart"]);
  const ChartData& b = env.chart(t["other"]);
  ChartMorphism map = [&] {
    const Json& m = t["map"];
    if (m.is_string()) {
      if (m != "nodal-unit-extension") fail(ErrorCode::Validation, "unknown chart morphism preset");
      return nodal_unit_extension_map();
    }
    return ChartMorphism{MonoidHom(a.q(), b.q(), int_vecs(m["on_q"])), MonoidHom(a.p(), b.p(), int_vecs(m["on_p"]))};
  }();
  InvarianceReport r = chart_change_invariance(a, b, map, env.module(t["module"]), t.value("degree_bound", std::size_t{3}));
  return Json{{"holds", r.holds()},
              {"well_defined", r.well_defined},
              {"bijective", r.bijective},
              {"inverse_checked", r.inverse_checked},
              {"graded", r.graded},
              {"monomials_checked", r.monomials_checked},
              {"verdict", r.verdict},
              {"verdict_other", r.verdict_other}};
}

Json log_elems_json(const std::vector<LogElem>& es) {
  Json out = Json::array();
  for (const auto& e : es) out.push_back(Json{{"r", to_json(e.r)}, {"u", e.u.to_string()}});
  return out;
}

Json polys_json(const std::vector<Poly>& ps) {
  Json out = Json::array();
  for (const auto& p : ps) out.push_back(p.to_string());
  return out;
}

Json task_lift(Env& env, const Json& t) {
  const HomotopyProblem& pr = env.lift_problem(t["problem"]);
  std::vector<std::uint64_t> seeds{0, 1, 2};
  if (t.contains("seeds")) seeds = t["seeds"].get<std::vector<std::uint64_t>>();
  if (seeds.empty()) fail(ErrorCode::Validation, "lift needs at least one seed");
  std::vector<HomotopyLift> lifts;
  for (auto s : seeds) lifts.push_back(homotopy_lift(pr, {.seed = s, .shortcut = t.value("shortcut", false)}));
  const HomotopyLift& l = lifts.front();
  LiftCheck c = check_lift(pr, l);
  Json roots = Json::array();
  for (const auto& r : l.roots)
    roots.push_back(Json{{"variable", r.variable}, {"degree", r.degree}, {"unit", r.unit.to_string()}});
  bool all_checks = true, unique = true;
  for (const auto& x : lifts) all_checks = all_checks && check_lift(pr, x).all();
  for (const auto& x : lifts)
    for (const auto& y : lifts) {
      try {
        verify_lift_uniqueness(pr, x, y);
      } catch (const Error&) {
        unique = false;
      }
    }
  return Json{{"steps", l.steps},
              {"cover", l.cover.to_string()},
              {"roots", roots},
              {"l", log_elems_json(l.l)},
              {"alpha", polys_json(l.alpha)},
              {"beta", polys_json(l.beta)},
              {"check",
               Json{{"homomorphisms", c.homomorphisms}, {"alpha_b", c.alpha_b}, {"beta_l", c.beta_l}, {"eta", c.eta}}},
              {"cover_free", cover_is_free(pr, l)},
              {"seeds", seeds},
              {"all_seeds_check", all_checks},
              {"pairwise_homotopies", unique}};
}

Json task_glue(Env& env, const Json& t) {
  const GluingDatum& g = env.gluing(t["gluing"]);
  const CocartesianCertificate& c = g.certificate;
  auto d = g.c.vector_space_dim();
  return Json{{"ring", g.c.to_string()},
              {"recipe_generators", g.recipe_generators},
              {"dim", d ? Json(*d) : Json(nullptr)},
              {"certificate",
               Json{{"holds", c.holds()},
                    {"commutes", c.commutes},
                    {"projections_surjective", c.projections_surjective},
                    {"injective", c.injective},
                    {"tensor_is_c0", c.tensor_is_c0},
                    {"kernels_multiply_to_zero", c.kernels_multiply_to_zero}}}};
}

Json task_descend(Env& env, const Json& t) {
  const DescentDatum& d = env.datum(t["datum"]);
  Subquotient s = descend_D(d);
  Json gens = Json::array();
  for (const auto& v : s.generators) gens.push_back(vec_json(v));
  return Json{{"module", module_json(s.module)}, {"generators_in_sum", gens}, {"gate", tor_gate(d.gluing, s.module)}};
}

Json task_roundtrip(Env& env, const Json& t) {
  if (t.contains("datum")) {
    DatumRoundtrip r = roundtrip_check(env.datum(t["datum"]));
    return Json{{"direction", "PD"},
                {"holds", r.holds()},
                {"side1_iso", r.side1_iso},
                {"side2_iso", r.side2_iso},
                {"clutching", r.clutching}};
  }
  if (!t.contains("gluing")) fail(ErrorCode::Validation, "roundtrip on a module needs a gluing");
  const GluingDatum& g = env.gluing(t["gluing"]);
  ModuleRoundtrip r = roundtrip_check(g, env.module(t["module"]));
  auto opt = [](const std::optional<std::size_t>& d) { return d ? Json(*d) : Json(nullptr); };
  return Json{{"direction", "DP"},  {"gate", r.gate},         {"iso", r.iso()},
              {"consistent", r.consistent()}, {"dim_module", opt(r.dim_m)}, {"dim_DP", opt(r.dim_dp)}};
}

Json run_task(Env& env, const Json& t, const Options& o) {
  const std::string k = t["kind"].get<std::string>();
  if (k == "classify") return task_classify(env, t);
  if (k == "primes") return task_primes(env, t);
  if (k == "flat") return task_flat(env, t);
  if (k == "basis") return task_basis(env, t, o.window);
  if (k == "graded_flat") return task_graded_flat(env, t);
  if (k == "nodal_panel") return task_nodal_panel(env, t);
  if (k == "log_flat_point") return task_log_flat_point(env, t);
  if (k == "chart_criterion") return task_chart_criterion(env, t);
  if (k == "chart_invariance") return task_chart_invariance(env, t);
  if (k == "lift") return task_lift(env, t);
  if (k == "glue") return task_glue(env, t);
  if (k == "descend") return task_descend(env, t);
  return task_roundtrip(env, t);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::InvalidArgument, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json error_json(const Error& e) { return Json{{"code", error_code_name(e.code())}, {"message", e.what()}}; }

}  // namespace

Json parse_problem(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(ErrorCode::Parse, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                               std::string(e.what()).substr(std::string(e.what()).find(':') + 2));
  }
}

void validate_problem(const Json& p) {
  if (!p.is_object()) invalid("input", "top level must be an object");
  if (!p.contains("version") || !p["version"].is_number_integer()) invalid("input", "missing integer version");
  if (p["version"].get<int>() != kFormatVersion) invalid("input", "unsupported version " + p["version"].dump());
  for (const auto& [key, _] : p.items())
    if (key != "version" && key != "objects" && key != "tasks" && key != "field" && key != "description")
      invalid("input", "unknown top-level field " + key);
  if (p.contains("field")) {
    if (!p["field"].is_string()) invalid("input", "field must be a string");
    parse_field(p["field"].get<std::string>());
  }
  for (const char* key : {"objects", "tasks"})
    if (p.contains(key) && !p[key].is_array()) invalid("input", std::string(key) + " must be an array");

  std::map<std::string, std::string> kinds;
  const Json objects = p.value("objects", Json::array());
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const Json& o = objects[i];
    const std::string where = "objects[" + std::to_string(i) + "]";
    if (!o.is_object()) invalid(where, "must be an object");
    if (!o.contains("name") || !o["name"].is_string()) invalid(where, "missing name");
    if (!o.contains("kind") || !o["kind"].is_string()) invalid(where, "missing kind");
    const std::string name = o["name"].get<std::string>(), kind = o["kind"].get<std::string>();
    if (name.empty() || name.find('.') != std::string::npos) invalid(where, "bad name '" + name + "'");
    if (!object_kinds().count(kind)) invalid(where, "unknown kind '" + kind + "'");
    if (!kinds.emplace(name, kind).second) invalid(where, "duplicate name '" + name + "'");
  }
  for (std::size_t i = 0; i < objects.size(); ++i)
    check_fields(objects[i], object_specs().at(objects[i]["kind"].get<std::string>()), kinds,
                 "objects[" + std::to_string(i) + "] (" + objects[i]["name"].get<std::string>() + ")");

  const Json tasks = p.value("tasks", Json::array());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Json& t = tasks[i];
    const std::string where = "tasks[" + std::to_string(i) + "]";
    if (!t.is_object()) invalid(where, "must be an object");
    if (!t.contains("kind") || !t["kind"].is_string()) invalid(where, "missing kind");
    const std::string kind = t["kind"].get<std::string>();
    if (!task_specs().count(kind)) invalid(where, "unknown task kind '" + kind + "'");
    check_fields(t, task_specs().at(kind), kinds, where);
  }
}

RunResult run_problem(const Json& problem, const Options& options) {
  validate_problem(problem);
  Field field = options.field ? *options.field
                              : problem.contains("field") ? parse_field(problem["field"].get<std::string>())
                                                          : Field::rationals();
  // Keys sorted, so equal inputs give equal bytes.
  Json normalized = Json::parse(nlohmann::json(problem).dump());
  if (options.field) normalized["field"] = field_flag(field);

  auto start = std::chrono::steady_clock::now();
  Env env(problem, field);
  RunResult out;
  Json results = Json::array(), task_ms = Json::array();
  const Json tasks = problem.value("tasks", Json::array());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Json& t = tasks[i];
    auto t0 = std::chrono::steady_clock::now();
    Json r{{"index", i}, {"kind", t["kind"]}};
    if (t.contains("name")) r["name"] = t["name"];
    try {
      Json body = run_task(env, t, options);
      r["status"] = "ok";
      for (auto& [k, v] : body.items()) r[k] = v;
    } catch (const Error& e) {
      r["status"] = "error";
      r["error"] = error_json(e);
      out.exit_code = 1;
    }
    results.push_back(r);
    task_ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  out.report = Json{{"report_version", kReportVersion},
                    {"engine",
                     Json{{"field", field.name()},
                          {"characteristic", field.characteristic()},
                          {"order", options.order},
                          {"window", options.window}}},
                    {"input", normalized},
                    {"results", results},
                    {"timing",
                     Json{{"total_ms",
                           std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count()},
                          {"task_ms", task_ms}}}};
  return out;
}

std::vector<std::string> gallery_names() {
  return {"expanded-degeneration", "nodal-degeneration", "nodal-descent", "smooth-divisor", "toric-point"};
}

std::string gallery_path(const std::string& name) { return std::string(LOGFLAT_GALLERY_DIR) + "/" + name + ".json"; }
std::string golden_path(const std::string& name) { return std::string(LOGFLAT_GOLDEN_DIR) + "/" + name + ".json"; }

GalleryResult run_gallery(const std::string& name, const Options& options) {
  auto names = gallery_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    fail(ErrorCode::UnknownGallery, "no gallery named '" + name + "'");
  GalleryResult g;
  g.run = run_problem(parse_problem(read_file(gallery_path(name))), options);
  if (std::filesystem::exists(golden_path(name))) {
    g.golden_found = true;
    g.matches = comparable(Json::parse(read_file(golden_path(name)))) == comparable(g.run.report);
  }
  return g;
}

Json comparable(Json report) {
  if (report.is_object()) report.erase("timing");
  return report;
}

std::string serialize(const Json& report, bool pretty) { return (pretty ? report.dump(2) : report.dump()) + "\n"; }

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Log flatness checks on explicit finite data", "logflat"};
  app.require_subcommand(1);
  std::string field = "q", order = "degrevlex", out_path;
  std::size_t window = 8;
  bool compact = false, pretty = false, update_golden = false;
  auto* field_opt = app.add_option("--field", field, "q or fp:<prime>");
  app.add_option("--order", order, "monomial order (degrevlex)");
  app.add_option("--window", window, "enumeration window for basis checks");
  app.add_option("--out", out_path, "write the report here instead of standard output");
  app.add_flag("--json", compact, "compact JSON");
  app.add_flag("--pretty", pretty, "indented JSON (default)");
  std::string file, name;
  auto* check = app.add_subcommand("check", "run the tasks of a problem file")->fallthrough();
  check->add_option("file", file)->required();
  auto* validate = app.add_subcommand("validate", "parse and validate a problem file")->fallthrough();
  validate->add_option("file", file)->required();
  auto* gallery = app.add_subcommand("gallery", "run a bundled example against its golden report")->fallthrough();
  gallery->add_option("name", name)->required();
  gallery->add_flag("--update-golden", update_golden, "rewrite the golden report")->group("");
  auto* list = app.add_subcommand("list-galleries", "names of the bundled examples");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  auto emit = [&](const Json& j) {
    std::string s = serialize(j, !compact || pretty);
    if (out_path.empty()) {
      out << s;
    } else {
      std::ofstream f(out_path, std::ios::binary);
      f << s;
    }
  };
  auto fail_with = [&](const Error& e) {
    err << e.what() << "\n";
    emit(Json{{"error", error_json(e)}});
    return e.code() == ErrorCode::Parse || e.code() == ErrorCode::Validation || e.code() == ErrorCode::UnknownGallery
               ? 2
               : 1;
  };

  try {
    Options opts;
    if (order != "degrevlex") fail(ErrorCode::Validation, "only degrevlex is supported");
    if (*field_opt) opts.field = parse_field(field);
    opts.window = window;
    if (*list) {
      for (const auto& n : gallery_names()) out << n << "\n";
      return 0;
    }
    if (*validate) {
      validate_problem(parse_problem(read_file(file)));
      emit(Json{{"valid", true}});
      return 0;
    }
    if (*check) {
      RunResult r = run_problem(parse_problem(read_file(file)), opts);
      emit(r.report);
      return r.exit_code;
    }
    GalleryResult g = run_gallery(name, opts);
    if (update_golden) {
      std::ofstream f(golden_path(name), std::ios::binary);
      f << serialize(comparable(g.run.report), true);
      g.golden_found = g.matches = true;
    }
    Json report = g.run.report;
    report["golden"] = Json{{"name", name}, {"found", g.golden_found}, {"matches", g.matches}};
    emit(report);
    return g.run.exit_code != 0 || !g.matches ? 1 : 0;
  } catch (const Error& e) {
    return fail_with(e);
  }
}

}  // namespace logflat::cli
