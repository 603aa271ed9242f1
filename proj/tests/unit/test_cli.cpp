#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "logflat/cli.hpp"
#include "logflat/error.hpp"

using namespace logflat;
using cli::Json;

namespace {

std::string temp_file(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("logflat_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::main(args, out, err);
  return {code, out.str(), err.str()};
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

const char* kNodal = R"({
  "version": 1,
  "objects": [
    {"name": "B", "kind": "ring", "vars": ["x", "y"], "relations": ["x*y"]},
    {"name": "M", "kind": "module", "ring": "B", "ideal": ["x+y"]}
  ],
  "tasks": [{"kind": "nodal_panel", "module": "M"}]
})";

Json problem(const std::string& text) { return cli::parse_problem(text); }

}  // namespace

TEST_CASE("nodal example: the panel is all false and the run succeeds") {
  Outcome o = run({"check", temp_file("nodal.json", kNodal), "--json"});
  CHECK(o.code == 0);
  Json report = Json::parse(o.out);
  const Json& r = report["results"][0];
  CHECK(r["status"] == "ok");
  CHECK(r["entries"].size() == 10);
  for (const auto& e : r["entries"]) CHECK(e["holds"] == false);
  CHECK(r["all_agree"] == true);
  // B/(x+y) = k[x]/(x²) is finite of dimension 2 and supported at the node; a flat module there would be free of
  // infinite dimension.
  Json dims = cli::run_problem(problem(R"({"version": 1,
    "objects": [{"name": "B", "kind": "ring", "vars": ["x", "y"], "relations": ["x*y"]},
                {"name": "M", "kind": "module", "ring": "B", "ideal": ["x+y"]},
                {"name": "G", "kind": "gluing", "preset": "nodal"},
                {"name": "N", "kind": "module", "ring": "G.c", "ideal": ["x+y"]}],
    "tasks": [{"kind": "roundtrip", "gluing": "G", "module": "N"}]})"))
                  .report;
  CHECK(dims["results"][0]["dim_module"] == 2);
}

TEST_CASE("validation errors exit with code 2") {
  Outcome unknown =
      run({"check", temp_file("unknown.json", R"({"version": 1, "objects": [{"name": "a", "kind": "bogus"}]})")});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("unknown kind 'bogus'") != std::string::npos);

  auto bad = [](const std::string& text) { return code_of([&] { cli::validate_problem(problem(text)); }); };
  CHECK(bad(R"({"objects": []})") == ErrorCode::Validation);
  CHECK(bad(R"({"version": 2})") == ErrorCode::Validation);
  CHECK(bad(R"({"version": 1, "extra": 0})") == ErrorCode::Validation);
  CHECK(bad(R"({"version": 1, "field": "fp:6"})") == ErrorCode::Validation);
  CHECK(bad(R"({"version": 1, "objects": [{"name": "a", "kind": "monoid", "free": 1},
                                          {"name": "a", "kind": "monoid", "free": 2}]})") == ErrorCode::Validation);
  CHECK(bad(R"({"version": 1, "tasks": [{"kind": "primes", "monoid": "nowhere"}]})") == ErrorCode::Validation);
  CHECK(bad(R"({"version": 1, "tasks": [{"kind": "dance"}]})") == ErrorCode::Validation);
  CHECK(bad(R"({"version": 1, "objects": [{"name": "R", "kind": "ring", "vars": ["x"]}],
                "tasks": [{"kind": "primes", "monoid": "R"}]})") == ErrorCode::Validation);
  CHECK(bad(R"({"version": 1, "objects": [{"name": "R", "kind": "ring", "vars": ["x"]}],
                "tasks": [{"kind": "nodal_panel"}]})") == ErrorCode::Validation);
  CHECK(bad(R"({"version": 1, "objects": [{"name": "R", "kind": "ring", "vars": ["x"]},
                                          {"name": "M", "kind": "module", "ring": "R.c", "rank": 1}]})") ==
        ErrorCode::Validation);
  CHECK(bad(R"({"version": 1, "objects": [{"name": "m", "kind": "monoid"}]})") == ErrorCode::Validation);
}

TEST_CASE("parse errors carry line and column") {
  try {
    cli::parse_problem("{\"version\": 1,\n  \"objects\": [,]}");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
    CHECK(std::string(e.what()).find("line 2, column 15") != std::string::npos);
  }
  Outcome o = run({"check", temp_file("broken.json", "{\"version\": 1")});
  CHECK(o.code == 2);
}

TEST_CASE("empty task list gives an empty report") {
  Outcome o = run({"check", temp_file("empty.json", R"({"version": 1, "objects": [], "tasks": []})"), "--json"});
  CHECK(o.code == 0);
  Json report = Json::parse(o.out);
  CHECK(report["results"].empty());
  CHECK(report["engine"]["field"] == "Q");
  CHECK(report["engine"]["order"] == "degrevlex");
}

TEST_CASE("task errors are reported in place with exit code 1") {
  auto r = cli::run_problem(problem(R"({"version": 1,
    "objects": [{"name": "R", "kind": "ring", "vars": ["x"]},
                {"name": "M", "kind": "module", "ring": "R", "ideal": ["x"]},
                {"name": "S", "kind": "module", "ring": "R", "sum": ["S"]}],
    "tasks": [{"kind": "nodal_panel", "module": "M"}, {"kind": "nodal_panel", "module": "S"}]})"));
  CHECK(r.exit_code == 1);
  CHECK(r.report["results"][0]["status"] == "error");
  CHECK(r.report["results"][0]["error"]["code"] == "UnsupportedShape");
  CHECK(r.report["results"][1]["error"]["code"] == "Validation");
  Outcome o = run({"check", temp_file("panel_line.json", r.report["input"].dump())});
  CHECK(o.code == 1);
}

TEST_CASE("every gallery reproduces its golden report") {
  for (const auto& name : cli::gallery_names()) {
    CAPTURE(name);
    cli::GalleryResult g = cli::run_gallery(name);
    CHECK(g.golden_found);
    CHECK(g.matches);
    CHECK(g.run.exit_code == 0);
  }
  Outcome o = run({"gallery", "nodal-descent", "--json"});
  CHECK(o.code == 0);
  CHECK(Json::parse(o.out)["golden"]["matches"] == true);
}

TEST_CASE("toric point gallery verdicts") {
  Json results = cli::run_gallery("toric-point").run.report["results"];
  std::vector<bool> verdicts;
  for (const auto& r : results)
    if (r["kind"] == "log_flat_point") verdicts.push_back(r["log_flat"].get<bool>());
  CHECK(verdicts == std::vector<bool>{true, false, false, true});
  CHECK(results[0]["count"] == 4);
  CHECK(results[1]["count"] == 2);
}

TEST_CASE("unknown gallery") {
  CHECK(code_of([] { cli::run_gallery("does-not-exist"); }) == ErrorCode::UnknownGallery);
  Outcome o = run({"gallery", "does-not-exist"});
  CHECK(o.code == 2);
  Outcome list = run({"list-galleries"});
  CHECK(list.code == 0);
  CHECK(list.out.find("toric-point\n") != std::string::npos);
}

TEST_CASE("reports are byte-identical apart from timing") {
  std::string path = cli::gallery_path("nodal-degeneration");
  Outcome a = run({"check", path, "--json"}), b = run({"check", path, "--json"});
  CHECK(a.code == 0);
  CHECK(cli::serialize(cli::comparable(Json::parse(a.out)), false) ==
        cli::serialize(cli::comparable(Json::parse(b.out)), false));
  CHECK(Json::parse(a.out).contains("timing"));
}

TEST_CASE("the embedded input reproduces the verdicts") {
  for (const auto& name : cli::gallery_names()) {
    CAPTURE(name);
    Json first = cli::run_gallery(name).run.report;
    Json second = cli::run_problem(first["input"]).report;
    CHECK(first["results"] == second["results"]);
    CHECK(first["input"] == second["input"]);
  }
}

TEST_CASE("field precedence: flag over file over the rationals") {
  const std::string text = R"({"version": 1, "field": "fp:7",
    "objects": [{"name": "R", "kind": "ring", "vars": ["x"]}, {"name": "M", "kind": "module", "ring": "R", "ideal": ["x^7-1"]}],
    "tasks": []})";
  CHECK(cli::run_problem(problem(text)).report["engine"]["characteristic"] == 7);
  cli::Options o;
  o.field = Field::prime(5);
  Json report = cli::run_problem(problem(text), o).report;
  CHECK(report["engine"]["field"] == "F5");
  CHECK(report["input"]["field"] == "fp:5");
  CHECK(cli::run_problem(problem(R"({"version": 1})")).report["engine"]["field"] == "Q");

  Outcome flag = run({"check", temp_file("field.json", text), "--field", "fp:5", "--json"});
  CHECK(Json::parse(flag.out)["engine"]["characteristic"] == 5);
  CHECK(run({"check", temp_file("field.json", text), "--field", "fp:4"}).code == 2);
  CHECK(run({"check", temp_file("field.json", text), "--order", "lex"}).code == 2);
}

TEST_CASE("reports go to --out and are pretty by default") {
  auto out = (std::filesystem::temp_directory_path() / "logflat_test_out.json").string();
  Outcome o = run({"check", temp_file("empty2.json", R"({"version": 1})"), "--out", out});
  CHECK(o.code == 0);
  CHECK(o.out.empty());
  std::ifstream in(out);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("\n  \"engine\"") != std::string::npos);
  CHECK(run({"validate", cli::gallery_path("smooth-divisor")}).code == 0);
}

TEST_CASE("monoid tasks through the file format") {
  Json r = cli::run_problem(problem(R"({"version": 1,
    "objects": [
      {"name": "N", "kind": "monoid", "free": 1},
      {"name": "N2", "kind": "monoid", "free": 2},
      {"name": "diag", "kind": "monoid_hom", "source": "N", "target": "N2", "images": [[1, 1]]},
      {"name": "max", "kind": "module_over_monoid", "monoid": "N2", "type": "ideal", "generators": [[1, 0], [0, 1]]},
      {"name": "ge2", "kind": "module_over_monoid", "monoid": "N", "type": "ideal", "generators": [[2]]},
      {"name": "big", "kind": "module_over_monoid", "monoid": "N", "type": "ideal",
       "generators": [["100000000000000000000000"]]}
    ],
    "tasks": [
      {"kind": "classify", "hom": "diag"},
      {"kind": "flat", "module": "max"},
      {"kind": "basis", "module": "ge2"},
      {"kind": "flat", "module": "big"}
    ]})"))
               .report["results"];
  CHECK(r[0]["free"] == "yes");
  CHECK(r[0]["vertical"] == true);
  CHECK(r[1]["flat"] == false);
  CHECK(r[1]["witness"] == Json::array({0, 1}));
  CHECK(r[2]["basis"] == Json::parse(R"([{"g": [2], "comp": 0}])"));
  CHECK(r[3]["flat"] == true);
}

TEST_CASE("lift and group-algebra tasks through the file format") {
  Json r = cli::run_problem(problem(R"({"version": 1,
    "objects": [
      {"name": "D", "kind": "ring", "vars": ["e"], "relations": ["e^2"]},
      {"name": "N", "kind": "monoid", "free": 1},
      {"name": "N2", "kind": "monoid", "free": 2},
      {"name": "diag", "kind": "monoid_hom", "source": "N", "target": "N2", "images": [[1, 1]]},
      {"name": "L", "kind": "lift_problem", "thick": "D", "ideal": ["e"], "chart": "N2", "h": "diag",
       "a": [{"r": [1, 1], "u": "1+e"}], "b": [{"r": [1, 0], "u": "1"}, {"r": [0, 1], "u": "1"}], "eta": ["1"]},
      {"name": "k", "kind": "ring", "vars": []},
      {"name": "G", "kind": "grading", "shape": "group_algebra", "base": "k", "rank": 1},
      {"name": "F", "kind": "module", "ring": "G", "rank": 2, "shifts": [[0], [1]]},
      {"name": "K", "kind": "module", "ring": "G", "rank": 1, "shifts": [[0]], "relations": [["u1-1"]]}
    ],
    "tasks": [
      {"kind": "lift", "problem": "L", "seeds": [0, 1, 2]},
      {"kind": "graded_flat", "module": "F", "grading": "G"},
      {"kind": "graded_flat", "module": "K", "grading": "G"}
    ]})"))
               .report["results"];
  CHECK(r[0]["status"] == "ok");
  for (const auto& [key, value] : r[0]["check"].items()) CHECK(value == true);
  CHECK(r[0]["all_seeds_check"] == true);
  CHECK(r[0]["pairwise_homotopies"] == true);
  CHECK(r[0]["roots"].empty());
  CHECK(r[1]["flat"] == true);
  CHECK(r[1]["shape"] == "group_algebra");
  CHECK(r[2]["error"]["code"] == "NotHomogeneous");
}

TEST_CASE("explicit chart morphisms through the file format") {
  Json r = cli::run_problem(problem(R"({"version": 1,
    "objects": [
      {"name": "X", "kind": "chart", "preset": "nodal"},
      {"name": "Y", "kind": "chart", "preset": "nodal-unit-extension"},
      {"name": "M", "kind": "module", "ring": "X.c", "ideal": ["x+y"]}
    ],
    "tasks": [
      {"kind": "chart_invariance", "chart": "X", "other": "Y", "map": "nodal-unit-extension", "module": "M"},
      {"kind": "chart_invariance", "chart": "X", "other": "X", "map": {"on_q": [[1]], "on_p": [[1, 0], [0, 1]]},
       "module": "M"},
      {"kind": "chart_invariance", "chart": "X", "other": "X", "map": "bogus", "module": "M"}
    ]})"))
               .report["results"];
  CHECK(r[0]["holds"] == true);
  CHECK(r[0]["verdict"] == false);
  CHECK(r[1]["status"] == "ok");
  CHECK(r[1]["verdict"] == r[1]["verdict_other"]);
  CHECK(r[2]["error"]["code"] == "Validation");
}
