#include "twjscc/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace twjscc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
  throw std::runtime_error("model_io: " + what);
}

const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) fail(std::string("missing field \"") + name + "\"");
  return *it;
}

std::vector<double> number_row(const json& j, const char* name) {
  if (!j.is_array()) fail(std::string(name) + ": expected an array of numbers");
  std::vector<double> row;
  row.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) fail(std::string(name) + ": non-numeric entry");
    row.push_back(v.get<double>());
  }
  return row;
}

// Rectangular [[..]] -> flat row-major + shape.
std::pair<std::vector<double>, std::pair<std::size_t, std::size_t>> matrix(
    const json& j, const char* name) {
  if (!j.is_array() || j.empty())
    fail(std::string(name) + ": expected a non-empty 2-d array");
  std::vector<double> flat;
  std::size_t cols = 0;
  for (const auto& r : j) {
    auto row = number_row(r, name);
    if (cols == 0)
      cols = row.size();
    else if (row.size() != cols)
      fail(std::string(name) + ": ragged rows");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  if (cols == 0) fail(std::string(name) + ": empty rows");
  return {std::move(flat), {j.size(), cols}};
}

json matrix_json(const std::vector<double>& flat, std::size_t rows,
                 std::size_t cols) {
  json out = json::array();
  for (std::size_t r = 0; r < rows; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < cols; ++c) row.push_back(flat[r * cols + c]);
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<std::size_t> index_table(const json& j, const char* name,
                                     std::vector<std::size_t> dims) {
  // Nested arrays with shape `dims`, flattened row-major.
  std::vector<std::size_t> flat;
  std::size_t expect = 1;
  for (std::size_t d : dims) expect *= d;
  flat.reserve(expect);
  std::function<void(const json&, std::size_t)> walk = [&](const json& node,
                                                           std::size_t depth) {
    if (depth == dims.size()) {
      if (!node.is_number_unsigned() && !node.is_number_integer())
        fail(std::string(name) + ": non-integer entry");
      const long long v = node.get<long long>();
      if (v < 0) fail(std::string(name) + ": negative entry");
      flat.push_back(static_cast<std::size_t>(v));
      return;
    }
    if (!node.is_array() || node.size() != dims[depth])
      fail(std::string(name) + ": wrong shape");
    for (const auto& child : node) walk(child, depth + 1);
  };
  walk(j, 0);
  return flat;
}

json index_table_json(const std::vector<std::size_t>& flat,
                      std::vector<std::size_t> dims) {
  std::function<json(std::size_t&, std::size_t)> build =
      [&](std::size_t& pos, std::size_t depth) -> json {
    if (depth == dims.size()) return json(flat[pos++]);
    json arr = json::array();
    for (std::size_t i = 0; i < dims[depth]; ++i)
      arr.push_back(build(pos, depth + 1));
    return arr;
  };
  std::size_t pos = 0;
  return build(pos, 0);
}

CondPMF cond_from_json(const json& j, const char* name) {
  if (!j.is_array() || j.empty())
    fail(std::string(name) + ": expected a non-empty array of rows");
  std::size_t cols = 0;
  for (const auto& r : j)
    if (r.is_array()) {
      cols = r.size();
      break;
    }
  if (cols == 0) fail(std::string(name) + ": every row is null");
  CondPMF c(j.size(), cols);
  for (std::size_t g = 0; g < j.size(); ++g) {
    const auto& r = j[g];
    if (r.is_null()) {
      c.mark_undefined(g);
      continue;
    }
    auto row = number_row(r, name);
    if (row.size() != cols) fail(std::string(name) + ": ragged rows");
    c.set_row(g, row);
  }
  return c;
}

json cond_to_json(const CondPMF& c) {
  json out = json::array();
  for (std::size_t g = 0; g < c.n_given(); ++g) {
    if (!c.row_defined(g)) {
      out.push_back(nullptr);
      continue;
    }
    json row = json::array();
    for (std::size_t o = 0; o < c.n_out(); ++o) row.push_back(c.at(g, o));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

Model parse_model(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  auto [src_flat, src_shape] = matrix(field(j, "source"), "source");

  const json& chj = field(j, "channel");
  if (!chj.is_array() || chj.empty()) fail("channel: expected a 4-d array");
  std::vector<double> trans;
  std::size_t nx1 = chj.size(), nx2 = 0, ny1 = 0, ny2 = 0;
  for (const auto& a : chj) {
    if (!a.is_array() || a.empty()) fail("channel: expected a 4-d array");
    if (nx2 == 0) nx2 = a.size();
    if (a.size() != nx2) fail("channel: ragged x2 axis");
    for (const auto& b : a) {
      if (!b.is_array() || b.empty()) fail("channel: expected a 4-d array");
      if (ny1 == 0) ny1 = b.size();
      if (b.size() != ny1) fail("channel: ragged y1 axis");
      for (const auto& c : b) {
        auto row = number_row(c, "channel");
        if (ny2 == 0) ny2 = row.size();
        if (row.size() != ny2) fail("channel: ragged y2 axis");
        trans.insert(trans.end(), row.begin(), row.end());
      }
    }
  }

  auto [d1_flat, d1_shape] = matrix(field(j, "distortion1"), "distortion1");
  auto [d2_flat, d2_shape] = matrix(field(j, "distortion2"), "distortion2");

  try {
    Model m{JointSourcePMF(src_shape.first, src_shape.second,
                           std::move(src_flat)),
            TwoWayChannel(nx1, nx2, ny1, ny2, std::move(trans)),
            DistortionMatrix(d1_shape.first, d1_shape.second,
                             std::move(d1_flat)),
            DistortionMatrix(d2_shape.first, d2_shape.second,
                             std::move(d2_flat))};
    if (m.distortion1.n_src() != m.source.n1())
      fail("distortion1 rows must match the first source alphabet");
    if (m.distortion2.n_src() != m.source.n2())
      fail("distortion2 rows must match the second source alphabet");
    return m;
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
}

Model load_model(const std::string& path) {
  return parse_model(read_file(path));
}

std::string model_to_json(const Model& m) {
  json j;
  j["source"] = matrix_json(m.source.mass(), m.source.n1(), m.source.n2());
  json ch = json::array();
  for (std::size_t x1 = 0; x1 < m.channel.nx1(); ++x1) {
    json a = json::array();
    for (std::size_t x2 = 0; x2 < m.channel.nx2(); ++x2) {
      json b = json::array();
      for (std::size_t y1 = 0; y1 < m.channel.ny1(); ++y1) {
        json c = json::array();
        for (std::size_t y2 = 0; y2 < m.channel.ny2(); ++y2)
          c.push_back(m.channel.at(x1, x2, y1, y2));
        b.push_back(std::move(c));
      }
      a.push_back(std::move(b));
    }
    ch.push_back(std::move(a));
  }
  j["channel"] = std::move(ch);
  auto dist_json = [](const DistortionMatrix& d) {
    std::vector<double> flat;
    flat.reserve(d.n_src() * d.n_rec());
    for (std::size_t s = 0; s < d.n_src(); ++s)
      for (std::size_t r = 0; r < d.n_rec(); ++r) flat.push_back(d.at(s, r));
    return matrix_json(flat, d.n_src(), d.n_rec());
  };
  j["distortion1"] = dist_json(m.distortion1);
  j["distortion2"] = dist_json(m.distortion2);
  return j.dump(2) + "\n";
}

HybridScheme parse_scheme(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  HybridScheme sch;
  sch.pu1_s1 = cond_from_json(field(j, "PU1_S1"), "PU1_S1");
  sch.pu2_s2 = cond_from_json(field(j, "PU2_S2"), "PU2_S2");
  const std::size_t nu1 = field(j, "U1").get<std::size_t>();
  const std::size_t nu2 = field(j, "U2").get<std::size_t>();
  if (nu1 != sch.pu1_s1.n_out() || nu2 != sch.pu2_s2.n_out())
    fail("U1/U2 sizes disagree with the test channel tables");
  const std::size_t n1 = sch.pu1_s1.n_given(), n2 = sch.pu2_s2.n_given();
  sch.f1 = index_table(field(j, "f1"), "f1", {nu1, n1});
  sch.f2 = index_table(field(j, "f2"), "f2", {nu2, n2});
  const json& g1 = field(j, "g1");
  const json& g2 = field(j, "g2");
  // The y axis length is whatever the innermost arrays carry.
  auto innermost = [](const json& node) {
    const json* p = &node;
    while (p->is_array() && !p->empty() && (*p)[0].is_array()) p = &(*p)[0];
    return p->is_array() ? p->size() : 0;
  };
  sch.g1 = index_table(g1, "g1", {nu2, nu1, n1, innermost(g1)});
  sch.g2 = index_table(g2, "g2", {nu1, nu2, n2, innermost(g2)});
  return sch;
}

HybridScheme load_scheme(const std::string& path) {
  return parse_scheme(read_file(path));
}

std::string scheme_to_json(const HybridScheme& sch) {
  const std::size_t nu1 = sch.u1_size(), nu2 = sch.u2_size();
  const std::size_t n1 = sch.pu1_s1.n_given(), n2 = sch.pu2_s2.n_given();
  json j;
  j["U1"] = nu1;
  j["U2"] = nu2;
  j["PU1_S1"] = cond_to_json(sch.pu1_s1);
  j["PU2_S2"] = cond_to_json(sch.pu2_s2);
  j["f1"] = index_table_json(sch.f1, {nu1, n1});
  j["f2"] = index_table_json(sch.f2, {nu2, n2});
  j["g1"] = index_table_json(sch.g1,
                             {nu2, nu1, n1, sch.g1.size() / (nu2 * nu1 * n1)});
  j["g2"] = index_table_json(sch.g2,
                             {nu1, nu2, n2, sch.g2.size() / (nu1 * nu2 * n2)});
  return j.dump(2) + "\n";
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string curve_to_csv(const RDCurve& curve) {
  std::string out = "D,R,slope\n";
  for (const RDPoint& p : curve.points) {
    out += format_double(p.distortion);
    out += ',';
    out += format_double(p.rate);
    out += ',';
    out += format_double(p.slope);
    out += '\n';
  }
  return out;
}

std::string region_to_csv(const RegionBoundary& region) {
  std::string out = "kind,x,y\n";
  auto row = [&](const char* kind, Point2 p) {
    out += kind;
    out += ',';
    out += format_double(p.x);
    out += ',';
    out += format_double(p.y);
    out += '\n';
  };
  for (const Point2& p : region.points) row("point", p);
  for (const Point2& p : region.hull) row("hull", p);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open \"" + path + "\" for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail("cannot open \"" + path + "\" for writing");
  out << content;
  if (!out.flush()) fail("short write to \"" + path + "\"");
}

}  // namespace twjscc
