// Command-line front end. All mathematics lives behind the C API: this file
// only translates flags into a JSON request and renders the JSON report.
#include "cubesum.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

using json = nlohmann::ordered_json;

int main(int argc, char** argv) {
  CLI::App app{"verification suite for the cube-sum curves x^3 + y^3 = n"};
  app.require_subcommand(1);

  long prec = 256;
  if (const char* env = std::getenv("CUBESUM_PREC")) prec = std::atol(env);
  std::string cache_dir = "./an-cache";
  bool pretty = false;
  app.add_option("--prec", prec, "working precision in bits")
      ->capture_default_str();
  app.add_option("--cache-dir", cache_dir, "coefficient cache directory")
      ->capture_default_str();
  app.add_flag("--pretty", pretty, "indent the JSON report");

  std::string a_str, b_str;
  long p = 0, n = 0, q = 3, order = 0, trials = 25;

  CLI::App* c_hilbert = app.add_subcommand("hilbert", "cubic Hilbert symbol at 3");
  c_hilbert->add_option("--a", a_str, "first argument, e.g. 1+3w")->required();
  c_hilbert->add_option("--b", b_str, "second argument, e.g. 3")->required();

  CLI::App* c_chars = app.add_subcommand("chars", "3-adic character tables");
  c_chars->add_option("--p", p)->required();

  CLI::App* c_curve = app.add_subcommand("curve-info", "conductor, Tamagawa, torsion");
  c_curve->add_option("--n", n)->required();

  CLI::App* c_mod = app.add_subcommand("modaction", "matrix identities at level 3^5");
  c_mod->add_option("--p", p)->required();

  CLI::App* c_beta = app.add_subcommand("local-beta", "local toric periods at 3");
  c_beta->add_option("--p", p)->required();

  CLI::App* c_scan = app.add_subcommand("waldspurger-scan",
                                        "randomized local-period property suite");
  c_scan->add_option("--q", q)->required();
  c_scan->add_option("--n", n)->required();
  c_scan->add_option("--trials", trials);

  CLI::App* c_gal = app.add_subcommand("galois-check", "Galois relations of the CM point");
  c_gal->add_option("--p", p)->required();

  CLI::App* c_gz = app.add_subcommand("gz-check", "numeric Gross-Zagier identity");
  c_gz->add_option("--p", p)->required();

  CLI::App* c_lv = app.add_subcommand("lvalue", "L-value or L-derivative at 1");
  c_lv->add_option("--n", n)->required();
  c_lv->add_option("--order", order, "0 for L(1), 1 for L'(1)");

  CLI::App* c_bsd = app.add_subcommand("bsd3", "3-part BSD leading-term check");
  c_bsd->add_option("--p", p)->required();

  CLI::App* c_all = app.add_subcommand("all", "chain every per-prime check");
  c_all->add_option("--p", p)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return CUBESUM_USAGE_ERROR;
  }

  json args;
  args["prec"] = prec;
  args["cache-dir"] = cache_dir;
  std::string cmd;
  if (c_hilbert->parsed()) {
    cmd = "hilbert";
    args["a"] = a_str;
    args["b"] = b_str;
  } else if (c_chars->parsed()) {
    cmd = "chars";
    args["p"] = p;
  } else if (c_curve->parsed()) {
    cmd = "curve-info";
    args["n"] = n;
  } else if (c_mod->parsed()) {
    cmd = "modaction";
    args["p"] = p;
  } else if (c_beta->parsed()) {
    cmd = "local-beta";
    args["p"] = p;
  } else if (c_scan->parsed()) {
    cmd = "waldspurger-scan";
    args["q"] = q;
    args["n"] = n;
    args["trials"] = trials;
  } else if (c_gal->parsed()) {
    cmd = "galois-check";
    args["p"] = p;
  } else if (c_gz->parsed()) {
    cmd = "gz-check";
    args["p"] = p;
  } else if (c_lv->parsed()) {
    cmd = "lvalue";
    args["n"] = n;
    args["order"] = order;
  } else if (c_bsd->parsed()) {
    cmd = "bsd3";
    args["p"] = p;
  } else if (c_all->parsed()) {
    cmd = "all";
    args["p"] = p;
  }

  json req;
  req["command"] = cmd;
  req["args"] = args;
  std::string req_str = req.dump();

  cubesum_result* r = nullptr;
  int rc = cubesum_run(req_str.c_str(), &r);
  std::string body = cubesum_result_json(r);
  cubesum_result_free(r);

  if (pretty) {
    auto parsed = json::parse(body, nullptr, false);
    if (!parsed.is_discarded()) body = parsed.dump(2);
  }
  std::printf("%s\n", body.c_str());
  return rc;
}
