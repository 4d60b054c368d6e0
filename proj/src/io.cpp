#include "packlim/io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace packlim {

using Json = nlohmann::ordered_json;

namespace {

constexpr int FORMAT_VERSION = 1;

[[noreturn]] void fail(const std::string& msg) { throw CertParseError("certificate: " + msg); }

void expect_keys(const Json& obj, std::initializer_list<const char*> keys,
                 const std::string& where) {
  if (!obj.is_object()) fail(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) fail(where + ": unknown field \"" + it.key() + "\"");
  }
  for (const char* k : keys)
    if (!obj.contains(k)) fail(where + ": missing field \"" + k + "\"");
}

std::string get_string(const Json& obj, const char* key, const std::string& where) {
  if (!obj[key].is_string()) fail(where + ": \"" + std::string(key) + "\" must be a string");
  return obj[key].get<std::string>();
}

long long get_int(const Json& obj, const char* key, const std::string& where) {
  if (!obj[key].is_number_integer()) fail(where + ": \"" + std::string(key) + "\" must be an integer");
  return obj[key].get<long long>();
}

// ---- scalars ---------------------------------------------------------------

template <class S>
S parse_scalar(const std::string& s, const std::string& where);

template <>
Rat parse_scalar<Rat>(const std::string& s, const std::string& where) {
  auto v = parse_exact(s);
  if (!v) fail(where + ": \"" + s + "\" is not a canonical p/q scalar");
  return *v;
}

template <>
double parse_scalar<double>(const std::string& s, const std::string& where) {
  auto v = parse_float(s);
  if (!v) fail(where + ": \"" + s + "\" is not a decimal scalar");
  return *v;
}

std::string format_scalar(const Rat& v) { return format_exact(v); }
std::string format_scalar(double v) { return format_float(v); }

// Target scalars are rational in memory; in floating certificates they are
// written (and must be readable) as plain decimals.
template <class S>
Rat parse_target_scalar(const std::string& s, const std::string& where) {
  if constexpr (std::is_same_v<S, Rat>) {
    return parse_scalar<Rat>(s, where);
  } else {
    return rat_of_double(parse_scalar<double>(s, where));
  }
}

// Lenient marker for standalone target specs: accepts either scalar form.
struct AnyScalar {};
template <>
Rat parse_target_scalar<AnyScalar>(const std::string& s, const std::string& where) {
  if (auto q = parse_exact(s)) return *q;
  if (auto d = parse_float(s)) return rat_of_double(*d);
  fail(where + ": \"" + s + "\" is not a p/q or decimal scalar");
}

template <class S>
std::string format_target_scalar(const Rat& v) {
  if constexpr (std::is_same_v<S, Rat>)
    return format_exact(v);
  else
    return format_float(to_double(v));
}

// ---- targets ---------------------------------------------------------------

template <class S>
Json target_to_json(const Target& t) {
  Json j;
  if (const auto* b = std::get_if<BrickShape>(&t.shape)) {
    j["shape"] = "brick";
    Json dims = Json::array();
    for (const Rat& d : b->dims) dims.push_back(format_target_scalar<S>(d));
    j["dims"] = dims;
  } else if (const auto* b = std::get_if<BallShape>(&t.shape)) {
    j["shape"] = "ball";
    j["dim"] = b->dim;
    j["radius"] = format_target_scalar<S>(b->radius);
  } else if (const auto* h = std::get_if<HomothetShape>(&t.shape)) {
    j["shape"] = "homothet";
    j["lambda"] = format_target_scalar<S>(h->lambda);
    j["base"] = target_to_json<S>(*h->base);
  } else {
    j["shape"] = "funnel";
  }
  return j;
}

template <class S>
Target target_from_json(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("shape")) fail(where + ": malformed target");
  std::string shape = get_string(j, "shape", where);
  if (shape == "brick") {
    expect_keys(j, {"shape", "dims"}, where);
    if (!j["dims"].is_array() || j["dims"].empty()) fail(where + ": brick needs dims");
    std::vector<Rat> dims;
    for (const auto& d : j["dims"]) {
      if (!d.is_string()) fail(where + ": brick dims must be scalar strings");
      dims.push_back(parse_target_scalar<S>(d.get<std::string>(), where));
    }
    return brick_target(std::move(dims));
  }
  if (shape == "ball") {
    expect_keys(j, {"shape", "dim", "radius"}, where);
    return ball_target(static_cast<int>(get_int(j, "dim", where)),
                       parse_target_scalar<S>(get_string(j, "radius", where), where));
  }
  if (shape == "homothet") {
    expect_keys(j, {"shape", "lambda", "base"}, where);
    Target base = target_from_json<S>(j["base"], where + ".base");
    return homothet_target(std::move(base),
                           parse_target_scalar<S>(get_string(j, "lambda", where), where));
  }
  if (shape == "funnel") {
    expect_keys(j, {"shape"}, where);
    return funnel_target();
  }
  fail(where + ": unknown shape \"" + shape + "\"");
}

// ---- certificates ----------------------------------------------------------

template <class S>
Json cert_to_json(const Certificate<S>& c) {
  Json j;
  j["format_version"] = FORMAT_VERSION;
  j["arithmetic"] = std::is_same_v<S, Rat> ? "exact" : "float";
  j["dim"] = c.dim;
  j["mode"] = to_string(c.mode);

  Json col;
  col["kind"] = to_string(c.collection.kind);
  if (c.collection.kind == CollectionKind::custom) {
    Json dims = Json::array();
    for (const Piece& p : c.collection.pieces) {
      Json row = Json::array();
      for (const Rat& d : p.dims) row.push_back(format_target_scalar<S>(d));
      dims.push_back(row);
    }
    col["dims"] = dims;
  } else {
    col["n"] = c.collection.truncation;
  }
  j["collection"] = col;

  j["target"] = target_to_json<S>(c.target);

  Json pls = Json::array();
  for (const auto& p : c.placements) {
    Json pj;
    pj["piece_id"] = p.piece_id;
    Json theta = Json::array();
    for (const S& v : p.motion.theta.a) theta.push_back(format_scalar(v));
    pj["theta"] = theta;
    Json xi = Json::array();
    for (const S& v : p.motion.xi) xi.push_back(format_scalar(v));
    pj["xi"] = xi;
    pls.push_back(pj);
  }
  j["placements"] = pls;
  return j;
}

template <class S>
Certificate<S> cert_from_json(const Json& j) {
  Certificate<S> c;
  c.dim = static_cast<int>(get_int(j, "dim", "certificate"));
  if (c.dim < 1 || c.dim > 16) fail("dim out of range");

  std::string mode = get_string(j, "mode", "certificate");
  if (mode == "general")
    c.mode = Mode::general;
  else if (mode == "oriented")
    c.mode = Mode::oriented;
  else if (mode == "translated")
    c.mode = Mode::translated;
  else
    fail("unknown mode \"" + mode + "\"");

  const Json& col = j["collection"];
  if (!col.is_object()) fail("collection must be an object");
  std::string kind = get_string(col, "kind", "collection");
  if (kind == "moser_rectangles") {
    expect_keys(col, {"kind", "n"}, "collection");
    c.collection = moser_rectangles_collection(static_cast<int>(get_int(col, "n", "collection")));
  } else if (kind == "moser_squares") {
    expect_keys(col, {"kind", "n"}, "collection");
    c.collection = moser_squares_collection(static_cast<int>(get_int(col, "n", "collection")));
  } else if (kind == "custom") {
    expect_keys(col, {"kind", "dims"}, "collection");
    if (!col["dims"].is_array() || col["dims"].empty()) fail("custom collection needs dims");
    std::vector<std::vector<Rat>> dims;
    for (const auto& row : col["dims"]) {
      if (!row.is_array()) fail("custom dims rows must be arrays");
      std::vector<Rat> r;
      for (const auto& d : row) {
        if (!d.is_string()) fail("custom dims must be scalar strings");
        r.push_back(parse_target_scalar<S>(d.get<std::string>(), "collection"));
      }
      dims.push_back(std::move(r));
    }
    c.collection = custom_collection(std::move(dims));
  } else {
    fail("unknown collection kind \"" + kind + "\"");
  }
  if (c.collection.dim() != c.dim) fail("collection dimension does not match dim");

  c.target = target_from_json<S>(j["target"], "target");
  if (c.target.dim() != c.dim) fail("target dimension does not match dim");

  if (!j["placements"].is_array()) fail("placements must be an array");
  std::vector<bool> seen(c.collection.pieces.size(), false);
  for (const auto& pj : j["placements"]) {
    expect_keys(pj, {"piece_id", "theta", "xi"}, "placement");
    Placement<S> p;
    p.piece_id = static_cast<int>(get_int(pj, "piece_id", "placement"));
    const Piece* piece = c.collection.find(p.piece_id);
    if (!piece) fail("placement references unknown piece id " + std::to_string(p.piece_id));
    size_t pos = piece - c.collection.pieces.data();
    if (seen[pos]) fail("piece id " + std::to_string(p.piece_id) + " placed twice");
    seen[pos] = true;

    const Json& theta = pj["theta"];
    const Json& xi = pj["xi"];
    if (!theta.is_array() || theta.size() != static_cast<size_t>(c.dim) * c.dim)
      fail("theta must have dim*dim entries");
    if (!xi.is_array() || xi.size() != static_cast<size_t>(c.dim)) fail("xi must have dim entries");
    p.motion.theta = Mat<S>(c.dim);
    for (size_t q = 0; q < theta.size(); ++q) {
      if (!theta[q].is_string()) fail("theta entries must be scalar strings");
      p.motion.theta.a[q] = parse_scalar<S>(theta[q].get<std::string>(), "theta");
    }
    p.motion.xi.resize(c.dim);
    for (int q = 0; q < c.dim; ++q) {
      if (!xi[q].is_string()) fail("xi entries must be scalar strings");
      p.motion.xi[q] = parse_scalar<S>(xi[q].get<std::string>(), "xi");
    }
    c.placements.push_back(std::move(p));
  }
  return c;
}

} // namespace

std::string serialize_certificate(const AnyCertificate& cert) {
  Json j = std::visit([](const auto& c) { return cert_to_json(c); }, cert);
  return j.dump(2) + "\n";
}

AnyCertificate parse_certificate(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("not valid JSON: ") + e.what());
  }
  expect_keys(j, {"format_version", "arithmetic", "dim", "mode", "collection", "target",
                  "placements"},
              "certificate");
  if (get_int(j, "format_version", "certificate") != FORMAT_VERSION)
    fail("unsupported format_version");
  std::string arithmetic = get_string(j, "arithmetic", "certificate");
  if (arithmetic == "exact") return cert_from_json<Rat>(j);
  if (arithmetic == "float") return cert_from_json<double>(j);
  fail("unknown arithmetic \"" + arithmetic + "\"");
}

AnyCertificate load_certificate(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CertParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_certificate(ss.str());
}

void save_certificate(const AnyCertificate& cert, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize_certificate(cert);
}

std::string serialize_verification_report(const VerificationReport& rep) {
  Json j;
  j["verdict"] = to_string(rep.verdict);
  Json v = Json::array();
  for (const Violation& viol : rep.violations) {
    Json vj;
    switch (viol.kind) {
      case Violation::Kind::containment:
        vj["kind"] = "containment";
        vj["piece"] = viol.i;
        break;
      case Violation::Kind::overlap:
        vj["kind"] = "overlap";
        vj["piece"] = viol.i;
        vj["other"] = viol.j;
        break;
      case Violation::Kind::mode:
        vj["kind"] = "mode";
        vj["piece"] = viol.i;
        break;
    }
    vj["margin"] = format_float(viol.margin);
    v.push_back(vj);
  }
  j["violations"] = v;
  if (rep.infinite_volume)
    j["coverage"] = nullptr;
  else if (rep.coverage_exact)
    j["coverage"] = format_exact(*rep.coverage_exact);
  else
    j["coverage"] = format_float(rep.coverage);
  j["slack_used"] = format_float(rep.slack_used);
  j["partial"] = rep.partial;
  return j.dump(2) + "\n";
}

template <class S>
std::string serialize_limit_report(const LimitReport<S>& rep) {
  Json j;
  Json kept = Json::array();
  for (int i : rep.kept_indices) kept.push_back(i);
  j["kept_indices"] = kept;
  j["cluster_diameter"] = format_float(rep.cluster_diameter);
  j["certified_slack"] = format_float(rep.certified_slack);
  j["verdict"] = to_string(rep.verdict.verdict);
  if (rep.verdict.coverage_exact)
    j["coverage"] = format_exact(*rep.verdict.coverage_exact);
  else
    j["coverage"] = format_float(rep.verdict.coverage);
  j["xi_in_bound"] = rep.xi_in_bound;
  return j.dump(2) + "\n";
}

template std::string serialize_limit_report<Rat>(const LimitReport<Rat>&);
template std::string serialize_limit_report<double>(const LimitReport<double>&);

Target parse_target_spec(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("target spec: not valid JSON: ") + e.what());
  }
  return target_from_json<AnyScalar>(j, "target");
}

std::vector<std::vector<Rat>> parse_dims_csv(const std::string& text) {
  std::vector<std::vector<Rat>> rows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<Rat> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      // trim
      size_t a = cell.find_first_not_of(" \t");
      size_t b = cell.find_last_not_of(" \t");
      if (a == std::string::npos)
        throw CertParseError("csv: empty cell at line " + std::to_string(lineno));
      cell = cell.substr(a, b - a + 1);
      if (auto q = parse_exact(cell)) {
        row.push_back(*q);
      } else if (auto d = parse_float(cell)) {
        row.push_back(rat_of_double(*d));
      } else {
        throw CertParseError("csv: bad scalar \"" + cell + "\" at line " + std::to_string(lineno));
      }
    }
    if (row.empty()) throw CertParseError("csv: empty row at line " + std::to_string(lineno));
    rows.push_back(std::move(row));
  }
  return rows;
}

} // namespace packlim
