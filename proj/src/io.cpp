#include "dqlin/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "dqlin/errors.hpp"

namespace dqlin {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

json complex_pair(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InputError("complex number must be a [re, im] pair");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

json symbol_to_json(const GaussPolySymbol& F) {
  const int d = F.dim();
  json M = json::array();
  for (int i = 0; i < d; ++i) {
    json row = json::array();
    for (int k = 0; k < d; ++k) row.push_back(complex_pair(F.quadratic()(i, k)));
    M.push_back(row);
  }
  json b = json::array();
  for (int i = 0; i < d; ++i) b.push_back(complex_pair(F.linear()(i)));
  json P = json::array();
  for (const auto& [m, c] : F.polynomial().sorted_terms()) {
    json e = json::array();
    for (int i = 0; i < d; ++i) e.push_back(m[i]);
    P.push_back(json::array({e, c.real(), c.imag()}));
  }
  return {{"dim", d}, {"M", M}, {"b", b}, {"c", complex_pair(F.constant())}, {"P", P}};
}

GaussPolySymbol symbol_from_json(const json& j) {
  const int d = j.at("dim").get<int>();
  CMat M(d, d);
  const json& jm = j.at("M");
  if (jm.size() != static_cast<std::size_t>(d)) throw InputError("symbol M has wrong size");
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) M(i, k) = complex_from(jm.at(i).at(k));
  CVec b(d);
  for (int i = 0; i < d; ++i) b(i) = complex_from(j.at("b").at(i));
  Polynomial P(d);
  for (const json& t : j.at("P")) {
    MultiIndex m;
    const json& e = t.at(0);
    if (e.size() != static_cast<std::size_t>(d)) throw InputError("symbol exponent has wrong length");
    for (int i = 0; i < d; ++i) m.set(i, e.at(i).get<int>());
    P.add_term(m, {t.at(1).get<double>(), t.at(2).get<double>()});
  }
  return GaussPolySymbol(M, b, complex_from(j.at("c")), std::move(P));
}

json matrix_to_json(const Mat& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
    rows.push_back(row);
  }
  return rows;
}

Mat matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j.at(0).is_array()) throw InputError("matrix must be a list of rows");
  const auto r = j.size(), c = j.at(0).size();
  Mat M(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (j.at(i).size() != c) throw InputError("matrix rows have different lengths");
    for (std::size_t k = 0; k < c; ++k) M(static_cast<long>(i), static_cast<long>(k)) = j.at(i).at(k).get<double>();
  }
  return M;
}

json flow_to_json(const FlowSolution& flow) {
  json t = json::array(), G = json::array(), L = json::array(), v = json::array();
  auto flat = [](const Mat& M) {
    json a = json::array();
    for (int i = 0; i < M.rows(); ++i)
      for (int k = 0; k < M.cols(); ++k) a.push_back(M(i, k));
    return a;
  };
  for (const auto& s : flow.samples()) {
    t.push_back(s.t);
    G.push_back(flat(s.Gamma));
    L.push_back(flat(s.Lambda));
    json vv = json::array();
    for (int i = 0; i < s.v.size(); ++i) vv.push_back(s.v(i));
    v.push_back(vv);
  }
  return {{"dim", flow.dim()}, {"t_max", flow.t_max()}, {"interp_order", flow.interp_order()},
          {"t", t}, {"Gamma", G}, {"Lambda", L}, {"v", v}};
}

std::string series_to_csv(const ExpectationSeries& s) {
  std::ostringstream os;
  os << "t,re,im\n";
  for (std::size_t k = 0; k < s.times.size(); ++k)
    os << format_double(s.times[k]) << ',' << format_double(s.values[k].real()) << ','
       << format_double(s.values[k].imag()) << '\n';
  return os.str();
}

json series_to_json(const ExpectationSeries& s) {
  json t = json::array(), re = json::array(), im = json::array();
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    t.push_back(s.times[k]);
    re.push_back(s.values[k].real());
    im.push_back(s.values[k].imag());
  }
  json meta = json::object();
  for (const auto& [k, v] : s.metadata) meta[k] = v;
  return {{"observable", s.observable}, {"t", t}, {"re", re}, {"im", im}, {"metadata", meta}};
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error("write to " + tmp.string() + " failed");
  }
  fs::rename(tmp, path);
}

}  // namespace dqlin
