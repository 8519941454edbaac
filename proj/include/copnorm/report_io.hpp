#pragma once

#include <cstdio>
#include <sstream>
#include <string>

#include "copnorm/normcalc.hpp"

namespace copnorm {

/// Fixed 17-significant-digit float serialization; round-trips doubles
/// bit-exactly and keeps emitted JSON/CSV stable across runs.
inline std::string fmt_double(double v) {
  if (v == 0.0) v = 0.0;  // canonicalize -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Display rounding for text mode only.
inline std::string fmt_double_short(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline std::string fmt_complex_text(Complex z) {
  std::string s = fmt_double_short(z.real());
  if (z.imag() >= 0.0)
    s += "+" + fmt_double_short(z.imag()) + "i";
  else
    s += "-" + fmt_double_short(-z.imag()) + "i";
  return s;
}

namespace detail {

struct JsonWriter {
  std::ostringstream os;
  bool first = true;

  void begin() { os << "{"; }
  void end() { os << "}"; }
  void key(const char* k) {
    if (!first) os << ",";
    first = false;
    os << "\"" << k << "\":";
  }
  void field(const char* k, double v) { key(k); os << fmt_double(v); }
  void field(const char* k, bool v) { key(k); os << (v ? "true" : "false"); }
  void field(const char* k, const std::string& v) { key(k); os << "\"" << v << "\""; }
  void null_field(const char* k) { key(k); os << "null"; }
};

}  // namespace detail

/// Canonical JSON for a norm report: fixed field order, 17-digit floats,
/// null for absent optionals.
inline std::string report_to_json(const NormReport& r) {
  detail::JsonWriter w;
  w.begin();
  w.field("map_class", std::string(map_kind_name(r.map_class.kind)));
  if (r.map_class.subtag)
    w.field("automorphism_subtag", std::string(automorphism_kind_name(*r.map_class.subtag)));
  else
    w.null_field("automorphism_subtag");
  if (r.qd) {
    w.key("qd");
    detail::JsonWriter q;
    q.begin();
    q.field("q", r.qd->q);
    q.field("d_re", r.qd->d.real());
    q.field("d_im", r.qd->d.imag());
    q.end();
    w.os << q.os.str();
  } else {
    w.null_field("qd");
  }
  if (r.hyper) {
    w.key("hyper");
    detail::JsonWriter h;
    h.begin();
    h.field("alpha_re", r.hyper->alpha.real());
    h.field("alpha_im", r.hyper->alpha.imag());
    h.field("beta_re", r.hyper->beta.real());
    h.field("beta_im", r.hyper->beta.imag());
    h.field("delta", r.hyper->delta);
    h.end();
    w.os << h.os.str();
  } else {
    w.null_field("hyper");
  }
  w.field("norm_sq", r.norm_sq);
  w.field("ess_norm_sq", r.ess_norm_sq);
  w.field("spectral_radius_sq", r.spectral_radius_sq);
  w.field("extremally_noncompact", r.extremally_noncompact);
  w.field("fast", r.fast);
  if (r.s_star_equals_norm)
    w.field("s_star_equals_norm", *r.s_star_equals_norm);
  else
    w.null_field("s_star_equals_norm");
  w.field("cohypo_status", std::string(cohypo_status_name(r.cohypo_status)));
  if (r.root) {
    w.key("root");
    detail::JsonWriter t;
    t.begin();
    t.field("t_root", r.root->t_root);
    t.field("x_root", r.root->x_root);
    t.end();
    w.os << t.os.str();
  } else {
    w.null_field("root");
  }
  w.end();
  return w.os.str();
}

inline std::string report_to_text(const NormReport& r) {
  std::ostringstream os;
  os << "class                 " << map_kind_name(r.map_class.kind);
  if (r.map_class.subtag) os << " (" << automorphism_kind_name(*r.map_class.subtag) << ")";
  os << "\n";
  if (r.qd)
    os << "qd                    q=" << fmt_double_short(r.qd->q)
       << " d=" << fmt_complex_text(r.qd->d) << "\n";
  os << "norm_sq               " << fmt_double_short(r.norm_sq) << "\n";
  os << "ess_norm_sq           " << fmt_double_short(r.ess_norm_sq) << "\n";
  os << "spectral_radius_sq    " << fmt_double_short(r.spectral_radius_sq) << "\n";
  os << "extremally_noncompact " << (r.extremally_noncompact ? "true" : "false") << "\n";
  os << "fast                  " << (r.fast ? "true" : "false") << "\n";
  os << "s_star_equals_norm    "
     << (r.s_star_equals_norm ? (*r.s_star_equals_norm ? "true" : "false") : "undecided")
     << "\n";
  os << "cohypo_status         " << cohypo_status_name(r.cohypo_status) << "\n";
  if (r.root)
    os << "root                  t=" << fmt_double_short(r.root->t_root)
       << " x=" << fmt_double_short(r.root->x_root) << "\n";
  return os.str();
}

}  // namespace copnorm
