#pragma once

#include <array>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "copnorm/error.hpp"
#include "copnorm/normcalc.hpp"
#include "copnorm/oracle.hpp"
#include "copnorm/report_io.hpp"
#include "copnorm/selfcheck.hpp"

namespace copnorm {

// Exit codes: 0 success, 1 generic/selfcheck failure, 2 NotSelfMap,
// 3 parse error, 4 oracle FAIL.
inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_not_self_map = 2;
inline constexpr int exit_parse_error = 3;
inline constexpr int exit_oracle_fail = 4;

enum class OutputFormat { json, csv, text };

struct RunConfig {
  double tolerance = 1e-12;
  int oracle_n = 512;
  int sweep_points = 180;
  OutputFormat format = OutputFormat::text;
  std::uint64_t seed = 0;
  std::string out_file;           // empty = stdout
  std::optional<int> max_terms;   // COPNORM_MAX_TERMS override

  void validate() const {
    if (!(tolerance > 1e-15 && tolerance < 1e-3))
      raise(errc::invalid_argument, "tolerance must lie in (1e-15, 1e-3)");
    if (oracle_n < 16 || oracle_n > 8192)
      raise(errc::invalid_argument, "oracle_n must lie in [16, 8192]");
    if (sweep_points < 2) raise(errc::invalid_argument, "sweep_points must be >= 2");
  }

  NormOptions norm_options() const {
    NormOptions o;
    o.tol = tolerance;
    if (max_terms) {
      o.max_terms = *max_terms;
      o.max_terms_slow = *max_terms;
    }
    return o;
  }

  int key_series_cap() const { return max_terms ? *max_terms : default_key_series_cap; }
};

/// Parses "re" or "re+imi" / "re-imi" with no spaces, e.g. "-36+48i".
inline Complex parse_complex(const std::string& token) {
  if (token.empty()) raise(errc::invalid_argument, "empty complex literal");
  // Split at the last '+'/'-' that is not the leading sign and not an
  // exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < token.size(); ++i) {
    char c = token[i];
    if ((c == '+' || c == '-') && token[i - 1] != 'e' && token[i - 1] != 'E')
      split = i;
  }
  auto to_double = [](const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      raise(errc::invalid_argument, "bad numeric literal '" + s + "'");
    }
    if (pos != s.size()) raise(errc::invalid_argument, "bad numeric literal '" + s + "'");
    return v;
  };
  if (token.back() == 'i' || token.back() == 'I') {
    std::string body = token.substr(0, token.size() - 1);
    if (split == std::string::npos) {
      // pure imaginary, e.g. "48i" or "-i"
      if (body.empty() || body == "+" || body == "-") body += "1";
      return Complex(0.0, to_double(body));
    }
    std::string re = token.substr(0, split);
    std::string im = token.substr(split, token.size() - 1 - split);
    if (im == "+" || im == "-") im += "1";
    return Complex(to_double(re), to_double(im));
  }
  if (split != std::string::npos)
    raise(errc::invalid_argument, "complex literal must end in 'i': '" + token + "'");
  return Complex(to_double(token), 0.0);
}

inline MoebiusMap parse_map(const std::array<std::string, 4>& tokens) {
  return MoebiusMap{parse_complex(tokens[0]), parse_complex(tokens[1]),
                    parse_complex(tokens[2]), parse_complex(tokens[3])};
}

namespace detail {

inline int emit(const RunConfig& cfg, const std::string& payload, std::ostream& out,
                std::ostream& err) {
  if (!cfg.out_file.empty()) {
    std::ofstream f(cfg.out_file);
    if (!f) {
      err << "error: cannot open output file '" << cfg.out_file << "'\n";
      return exit_failure;
    }
    f << payload;
    return exit_ok;
  }
  out << payload;
  return exit_ok;
}

inline int error_exit_code(const Error& e) {
  switch (e.code()) {
    case errc::not_self_map: return exit_not_self_map;
    case errc::invalid_argument: return exit_parse_error;
    default: return exit_failure;
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

inline int run_classify(const std::array<std::string, 4>& coeffs, const RunConfig& cfg,
                        std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    MoebiusMap map = parse_map(coeffs);
    MapClass cls = classify(map, cfg.tolerance);
    ImageDisk disk = image_disk(map);
    std::optional<TangencyPair> tangency;
    std::optional<QdForm> qd;
    if (cls.kind == MapKind::tangent_non_affine_non_auto ||
        cls.kind == MapKind::affine_self_map) {
      tangency = tangency_point(map, cfg.tolerance);
      if (cls.kind == MapKind::tangent_non_affine_non_auto)
        qd = qd_form(normalize_fix_one(map, cfg.tolerance).map, cfg.tolerance);
    }
    std::ostringstream os;
    if (cfg.format == OutputFormat::json) {
      detail::JsonWriter w;
      w.begin();
      w.field("map_class", std::string(map_kind_name(cls.kind)));
      if (cls.subtag)
        w.field("automorphism_subtag", std::string(automorphism_kind_name(*cls.subtag)));
      else
        w.null_field("automorphism_subtag");
      w.field("image_center_re", disk.center.real());
      w.field("image_center_im", disk.center.imag());
      w.field("image_radius", disk.radius);
      if (tangency) {
        w.field("zeta_re", tangency->zeta.real());
        w.field("zeta_im", tangency->zeta.imag());
        w.field("eta_re", tangency->eta.real());
        w.field("eta_im", tangency->eta.imag());
      } else {
        w.null_field("zeta_re");
        w.null_field("zeta_im");
        w.null_field("eta_re");
        w.null_field("eta_im");
      }
      if (qd) {
        w.field("q", qd->q);
        w.field("d_re", qd->d.real());
        w.field("d_im", qd->d.imag());
      } else {
        w.null_field("q");
        w.null_field("d_re");
        w.null_field("d_im");
      }
      w.end();
      os << w.os.str() << "\n";
    } else {
      os << "class        " << map_kind_name(cls.kind);
      if (cls.subtag) os << " (" << automorphism_kind_name(*cls.subtag) << ")";
      os << "\n";
      os << "image disk   center " << fmt_complex_text(disk.center) << " radius "
         << fmt_double_short(disk.radius) << "\n";
      if (tangency)
        os << "tangency     zeta " << fmt_complex_text(tangency->zeta) << " eta "
           << fmt_complex_text(tangency->eta) << "\n";
      if (qd)
        os << "qd form      q " << fmt_double_short(qd->q) << " d "
           << fmt_complex_text(qd->d) << "\n";
    }
    return detail::emit(cfg, os.str(), out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return detail::error_exit_code(e);
  }
}

// ---------------------------------------------------------------------------
// norm
// ---------------------------------------------------------------------------

inline int run_norm(const std::array<std::string, 4>& coeffs, const RunConfig& cfg,
                    std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    MoebiusMap map = parse_map(coeffs);
    NormReport rep = norm_sq(map, cfg.norm_options());
    std::string payload;
    if (cfg.format == OutputFormat::json)
      payload = report_to_json(rep) + "\n";
    else
      payload = report_to_text(rep);
    return detail::emit(cfg, payload, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return detail::error_exit_code(e);
  }
}

// ---------------------------------------------------------------------------
// sweep-theta
// ---------------------------------------------------------------------------

struct SweepRow {
  double theta = 0.0;
  double ess_norm_sq = 0.0;
  double norm_sq = 0.0;
  double q_ratio = 0.0;  // ||C|| / ||C||_e
  std::string error;
};

inline std::vector<SweepRow> sweep_theta_rows(const RunConfig& cfg) {
  const double two_pi = 6.283185307179586476925286766559;
  std::vector<SweepRow> rows(static_cast<size_t>(cfg.sweep_points));
  NormOptions opts = cfg.norm_options();
  for (int i = 0; i < cfg.sweep_points; ++i) {
    SweepRow& row = rows[static_cast<size_t>(i)];
    row.theta = two_pi * static_cast<double>(i) / static_cast<double>(cfg.sweep_points);
    try {
      MoebiusMap map = theta_family(row.theta);
      NormReport rep = norm_sq(map, opts);
      row.ess_norm_sq = rep.ess_norm_sq;
      row.norm_sq = rep.norm_sq;
      row.q_ratio = std::sqrt(rep.norm_sq / rep.ess_norm_sq);
    } catch (const Error& e) {
      row.error = errc_name(e.code());
    }
  }
  return rows;
}

inline int run_sweep_theta(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    std::vector<SweepRow> rows = sweep_theta_rows(cfg);
    int failures = 0;
    std::ostringstream os;
    if (cfg.format == OutputFormat::json) {
      os << "[";
      for (size_t i = 0; i < rows.size(); ++i) {
        const SweepRow& r = rows[i];
        if (!r.error.empty()) ++failures;
        detail::JsonWriter w;
        w.begin();
        w.field("theta", r.theta);
        w.field("ess_norm_sq", r.ess_norm_sq);
        w.field("norm_sq", r.norm_sq);
        w.field("Q", r.q_ratio);
        if (r.error.empty())
          w.null_field("error");
        else
          w.field("error", r.error);
        w.end();
        os << w.os.str() << (i + 1 < rows.size() ? "," : "");
      }
      os << "]\n";
    } else {
      os << "theta,ess_norm_sq,norm_sq,Q,error\n";
      for (const SweepRow& r : rows) {
        if (!r.error.empty()) ++failures;
        char theta_buf[32];
        std::snprintf(theta_buf, sizeof(theta_buf), "%.12f", r.theta);
        os << theta_buf << "," << fmt_double(r.ess_norm_sq) << "," << fmt_double(r.norm_sq)
           << "," << fmt_double(r.q_ratio) << "," << r.error << "\n";
      }
    }
    int rc = detail::emit(cfg, os.str(), out, err);
    if (rc != exit_ok) return rc;
    bool enough = 20 * failures <= static_cast<int>(rows.size());  // >= 95% rows succeed
    if (!enough) {
      err << "error: " << failures << " of " << rows.size() << " sweep rows failed\n";
      return exit_failure;
    }
    return exit_ok;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return detail::error_exit_code(e);
  }
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

inline int run_oracle(const std::array<std::string, 4>& coeffs, const RunConfig& cfg,
                      std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    MoebiusMap map = parse_map(coeffs);
    MapClass cls = classify(map, cfg.tolerance);
    if (cls.kind == MapKind::strictly_inside && !map.is_affine())
      raise(errc::unsupported_exact_norm,
            "oracle comparison needs an exact norm: use a tangent, automorphic, "
            "or affine symbol");
    if (cls.kind == MapKind::constant_map)
      raise(errc::invalid_argument, "oracle comparison is not defined for constants");
    NormReport rep = norm_sq(map, cfg.norm_options());
    double bound_tol = std::max(cfg.tolerance, 1e-6);
    double residual_tol = std::max(cfg.tolerance, 1e-9);

    std::ostringstream os;
    os << "norm_sq " << fmt_double(rep.norm_sq) << "\n";
    bool all_pass = true;
    double prev = -1.0;
    for (int n : {cfg.oracle_n / 4, cfg.oracle_n / 2, cfg.oracle_n}) {
      PowerIterationResult pi = truncated_norm_sq(operator_matrix(map, n));
      bool monotone = pi.value >= prev - 1e-9;
      bool below = pi.value <= rep.norm_sq + bound_tol;
      bool pass = monotone && below && pi.converged;
      all_pass = all_pass && pass;
      os << "matrix n=" << n << " " << fmt_double(pi.value) << " "
         << (pass ? "PASS" : "FAIL") << "\n";
      prev = pi.value;
    }
    if (rep.qd) {
      NormOptions series_opts = cfg.norm_options();
      for (double frac : {0.1, 0.25, 0.4}) {
        double res = identity_residual(*rep.qd, frac * rep.qd->q, cfg.key_series_cap(),
                                       series_opts.series_tol, series_opts.max_terms);
        bool pass = res < residual_tol;
        all_pass = all_pass && pass;
        os << "identity_residual x=" << fmt_double_short(frac * rep.qd->q) << " "
           << fmt_double(res) << " " << (pass ? "PASS" : "FAIL") << "\n";
      }
    }
    os << (all_pass ? "PASS" : "FAIL") << "\n";
    int rc = detail::emit(cfg, os.str(), out, err);
    if (rc != exit_ok) return rc;
    return all_pass ? exit_ok : exit_oracle_fail;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return detail::error_exit_code(e);
  }
}

// ---------------------------------------------------------------------------
// selfcheck
// ---------------------------------------------------------------------------

inline int run_selfcheck(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    std::vector<SuiteResult> suites = run_selfcheck_suites(cfg.seed, cfg.tolerance);
    std::ostringstream os;
    int total_failed = 0;
    for (const SuiteResult& s : suites) {
      os << s.name << ": " << s.passed << " passed, " << s.failed << " failed\n";
      total_failed += s.failed;
    }
    os << (total_failed == 0 ? "OK" : "FAILED") << "\n";
    int rc = detail::emit(cfg, os.str(), out, err);
    if (rc != exit_ok) return rc;
    if (total_failed != 0) {
      for (const SuiteResult& s : suites)
        if (s.failed > 0) err << s.name << " first failure: " << s.first_failure << "\n";
      return exit_failure;
    }
    return exit_ok;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return detail::error_exit_code(e);
  }
}

}  // namespace copnorm
