#include <cmath>
#include <cstring>
#include <string>

#include "doctest.h"
#include "polydisc/polydisc.h"

TEST_CASE("function handles through the C interface") {
  CHECK(std::strlen(pd_version()) > 0);
  pd_coeff_fn* k = nullptr;
  double w = 0.5;
  REQUIRE(pd_coeff_kernel(1, &w, 0.0, &k) == PD_OK);
  CHECK(pd_coeff_dim(k) == 1);
  double zr = 0.5, zi = 0.0, vr = 0, vi = 0;
  REQUIRE(pd_coeff_evaluate(k, &zr, &zi, &vr, &vi) == PD_OK);
  CHECK(std::abs(vr - 1.0 / 0.75) < 1e-9);
  CHECK(std::abs(vi) < 1e-15);

  pd_space h2{PD_HARDY, 2.0, 0, 0, 0, 0};
  double norm = 0;
  int conv = 0;
  REQUIRE(pd_space_norm(k, &h2, &norm, &conv) == PD_OK);
  CHECK(conv == 1);
  CHECK(std::abs(norm - std::sqrt(1.0 / 0.75)) < 1e-6);

  double r = 0.9, m = 0;
  REQUIRE(pd_integral_mean(k, &r, INFINITY, &m) == PD_OK);
  CHECK(std::abs(m - 1.0 / 0.55) < 1e-8);

  char* text = nullptr;
  REQUIRE(pd_coeff_format(k, &text) == PD_OK);
  pd_coeff_fn* back = nullptr;
  REQUIRE(pd_coeff_from_text(text, &back) == PD_OK);
  CHECK(pd_coeff_size(back) == pd_coeff_size(k));
  pd_string_free(text);
  pd_coeff_free(back);
  pd_coeff_free(k);
}

TEST_CASE("errors map to status codes with a message") {
  pd_coeff_fn* f = nullptr;
  double w = 1.5;
  CHECK(pd_coeff_kernel(1, &w, 0.0, &f) != PD_OK);
  CHECK(f == nullptr);
  CHECK(std::strlen(pd_last_error()) > 0);
  CHECK(pd_coeff_from_text("garbage", &f) == PD_PARSE);

  pd_coeff_fn* g = nullptr;
  REQUIRE(pd_coeff_random(3, 1, 8, "unit-disk", &g) == PD_OK);
  pd_space bad{PD_MIXED_A, 1.0, 1.0, -1.0, 0, 0};
  double v = 0;
  int c = 0;
  CHECK(pd_space_norm(g, &bad, &v, &c) == PD_DOMAIN);
  pd_coeff_fn* d = nullptr;
  CHECK(pd_coeff_frac_derivative(g, -2.0, &d) != PD_OK);
  pd_coeff_free(g);
}

TEST_CASE("config and run through the C interface") {
  pd_config* cfg = nullptr;
  CHECK(pd_config_parse(R"({"experiments": [{"name": "b", "kind": "beta-integral-fit",
      "tol": -1, "per_octave": 0}]})", &cfg) == PD_PARSE);
  std::string msg = pd_last_error();
  CHECK(msg.find("tol") != std::string::npos);
  CHECK(msg.find("per_octave") != std::string::npos);

  REQUIRE(pd_config_parse(R"({"experiments": [{"name": "b", "kind": "beta-integral-fit"}]})", &cfg) == PD_OK);
  CHECK(pd_config_experiment_count(cfg) == 1);
  CHECK(std::string(pd_config_experiment_kind(cfg, 0)) == "beta-integral-fit");
  pd_report* rep = nullptr;
  REQUIRE(pd_run(cfg, nullptr, 1, &rep) == PD_OK);
  CHECK(pd_report_gate_count(rep) > 0);
  CHECK(pd_report_failed_count(rep) == 0);
  CHECK(std::string(pd_report_gate_name(rep, 0)).rfind("b/", 0) == 0);
  char* js = nullptr;
  REQUIRE(pd_report_json(rep, 0, &js) == PD_OK);
  CHECK(std::string(js).find("\"b\"") != std::string::npos);
  pd_string_free(js);
  pd_report_free(rep);
  CHECK(pd_run(cfg, "missing", 1, &rep) != PD_OK);
  pd_config_free(cfg);
}
