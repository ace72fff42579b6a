#pragma once

// JSON (de)serialisation of NetworkSpec and SpectralReport.
//
// Matrices are row-major nested arrays; every scalar is either a number or
// a [re, im] pair. A matrix may instead be an object naming a weight
// constructor, e.g. {"constructor": "center-surround", "n": 8}.

#include "organics/core.hpp"
#include "organics/spectral.hpp"
#include "organics/weights.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <string>

namespace organics::config {

using json = nlohmann::json;

class ConfigError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline cplx scalar_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError(where + ": expected a number or a [re, im] pair");
}

inline json scalar_to_json(cplx v) {
  if (v.imag() == 0.0) return v.real();
  return json::array({v.real(), v.imag()});
}

}  // namespace detail

// Builds a matrix from {"constructor": name, ...}. The current recurrent
// matrix is needed for "eigen-encoder" and "eigen-readout".
inline CMat construct_matrix(const json& j, const std::optional<CMat>& w_yy = std::nullopt) {
  const std::string name = j.at("constructor").get<std::string>();
  const int n = j.value("n", 8);
  if (name == "identity") return CMat::Identity(n, n);
  if (name == "center-surround") {
    weights::CenterSurroundBands bands;
    bands.self_w = j.value("self", bands.self_w);
    bands.flank_w = j.value("flank", bands.flank_w);
    bands.surround_w = j.value("surround", bands.surround_w);
    return weights::center_surround(n, bands).cast<cplx>();
  }
  if (name == "synfire") return weights::synfire(n).cast<cplx>();
  if (name == "ei-pair") return weights::ei_pair().cast<cplx>();
  if (name == "random-spectral") {
    weights::SpectrumRequest req;
    req.n = j.value("n", req.n);
    req.d = j.value("d", req.d);
    req.imag_std = j.value("imag_std", req.imag_std);
    req.seed = j.value("seed", req.seed);
    return weights::random_spectral(req);
  }
  if (name == "diagonal-oscillators") {
    const auto f = j.at("freqs_hz").get<std::vector<double>>();
    return weights::diagonal_oscillators(Eigen::Map<const RVec>(f.data(), static_cast<Eigen::Index>(f.size())),
                                         j.value("tau", 10.0));
  }
  if (name == "eigen-encoder" || name == "eigen-readout") {
    if (!w_yy) throw ConfigError(name + " needs w_yy to be defined first");
    const CMat v = weights::eigen_encoder(*w_yy, j.value("k", 2));
    return name == "eigen-encoder" ? v : CMat(v.adjoint());
  }
  throw ConfigError("unknown weight constructor '" + name + "'");
}

inline CMat matrix_from_json(const json& j, const std::string& where,
                             const std::optional<CMat>& w_yy = std::nullopt) {
  if (j.is_object()) return construct_matrix(j, w_yy);
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw ConfigError(where + ": expected a nested array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ConfigError(where + ": ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = detail::scalar_from_json(row[static_cast<std::size_t>(c)], where);
  }
  return m;
}

inline CVec vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array");
  CVec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = detail::scalar_from_json(j[i], where);
  return v;
}

inline RMat real_part(const CMat& m, const std::string& where) {
  if (!m.imag().isZero(0.0)) throw ConfigError(where + ": modulator weights must be real");
  return m.real();
}

inline json matrix_to_json(const CMat& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(detail::scalar_to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

inline json vector_to_json(const CVec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(detail::scalar_to_json(v[i]));
  return out;
}

// Parses a network. w_yy and w_zx are required; everything else defaults to
// zero (w_ry to the identity, tau_y to 10 ms).
inline NetworkSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("network config must be a JSON object");
  const json& w = j.contains("weights") ? j.at("weights") : j;
  if (!w.contains("w_yy") || !w.contains("w_zx")) throw ConfigError("network config needs weights.w_yy and weights.w_zx");

  const CMat w_yy = matrix_from_json(w.at("w_yy"), "w_yy");
  const CMat w_zx = matrix_from_json(w.at("w_zx"), "w_zx", w_yy);
  NetworkSpec s = NetworkSpec::zeros(w_yy.rows(), w_zx.cols());
  s.w_yy = w_yy;
  s.w_zx = w_zx;
  if (w.contains("w_ry")) {
    s.w_ry = matrix_from_json(w.at("w_ry"), "w_ry", w_yy);
    s.c_r = CVec::Zero(s.w_ry.rows());
  }
  if (w.contains("w_ax")) s.w_ax = real_part(matrix_from_json(w.at("w_ax"), "w_ax"), "w_ax");
  if (w.contains("w_bx")) s.w_bx = real_part(matrix_from_json(w.at("w_bx"), "w_bx"), "w_bx");
  if (w.contains("w_ay")) s.w_ay = real_part(matrix_from_json(w.at("w_ay"), "w_ay"), "w_ay");
  if (w.contains("w_by")) s.w_by = real_part(matrix_from_json(w.at("w_by"), "w_by"), "w_by");

  if (j.contains("offsets")) {
    const json& o = j.at("offsets");
    if (o.contains("c_z")) s.c_z = vector_from_json(o.at("c_z"), "c_z");
    if (o.contains("c_yhat")) s.c_yhat = vector_from_json(o.at("c_yhat"), "c_yhat");
    if (o.contains("c_r")) s.c_r = vector_from_json(o.at("c_r"), "c_r");
    if (o.contains("c_a")) s.c_a = vector_from_json(o.at("c_a"), "c_a").real();
    if (o.contains("c_b")) s.c_b = vector_from_json(o.at("c_b"), "c_b").real();
  }
  if (j.contains("tau_y")) {
    const json& t = j.at("tau_y");
    if (t.is_number())
      s.tau_y = RVec::Constant(s.n_neurons(), t.get<double>());
    else
      s.tau_y = vector_from_json(t, "tau_y").real();
  }
  s.tau_a = j.value("tau_a", s.tau_a);
  s.tau_b = j.value("tau_b", s.tau_b);
  s.validate();
  return s;
}

inline json spec_to_json(const NetworkSpec& s) {
  json w;
  w["w_zx"] = matrix_to_json(s.w_zx);
  w["w_yy"] = matrix_to_json(s.w_yy);
  w["w_ry"] = matrix_to_json(s.w_ry);
  w["w_ax"] = matrix_to_json(s.w_ax.cast<cplx>());
  w["w_ay"] = matrix_to_json(s.w_ay.cast<cplx>());
  w["w_bx"] = matrix_to_json(s.w_bx.cast<cplx>());
  w["w_by"] = matrix_to_json(s.w_by.cast<cplx>());
  json o;
  o["c_z"] = vector_to_json(s.c_z);
  o["c_yhat"] = vector_to_json(s.c_yhat);
  o["c_a"] = vector_to_json(s.c_a.cast<cplx>());
  o["c_b"] = vector_to_json(s.c_b.cast<cplx>());
  o["c_r"] = vector_to_json(s.c_r);
  json out;
  out["weights"] = std::move(w);
  out["offsets"] = std::move(o);
  out["tau_y"] = vector_to_json(s.tau_y.cast<cplx>());
  out["tau_a"] = s.tau_a;
  out["tau_b"] = s.tau_b;
  return out;
}

inline NetworkSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
  return spec_from_json(j);
}

inline json report_to_json(const SpectralReport& r) {
  json out;
  out["eigenvalues"] = vector_to_json(r.eigenvalues);
  out["effective_eigenvalues"] = vector_to_json(r.effective_eigenvalues);
  out["stability"] = to_string(r.stability);
  out["frequencies_hz"] = r.frequencies_hz;
  out["dimensionality"] = r.dimensionality;
  return out;
}

}  // namespace organics::config
