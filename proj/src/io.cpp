#include "lattice/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lattice/util.hpp"

namespace lattice {

namespace {

using nlohmann::json;

double weight_value(const json& v) {
  if (v.is_string()) {
    const std::string& s = v.get_ref<const std::string&>();
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw ParseError("bad weight value: " + s);
    return x;
  }
  if (v.is_number()) return v.get<double>();
  throw ParseError("weight values must be numbers or decimal strings");
}

std::vector<double> weight_array(const json& v) {
  if (!v.is_array()) throw ParseError("expected an array of weights");
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& x : v) out.push_back(weight_value(x));
  return out;
}

json string_array(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(format_double(x));
  return out;
}

std::string subset_key(std::uint64_t u, int d) {
  std::string key;
  for (int j = 1; j <= d; ++j) {
    if ((u >> (j - 1)) & 1) {
      if (!key.empty()) key += ',';
      key += std::to_string(j);
    }
  }
  return key;
}

std::uint64_t subset_mask(const std::string& key, int d) {
  std::uint64_t u = 0;
  std::stringstream ss(key);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const long j = std::strtol(item.c_str(), &end, 10);
    if (end == item.c_str() || *end != '\0' || j < 1 || j > d)
      throw ParseError("bad subset key: " + key);
    const std::uint64_t bit = std::uint64_t{1} << (j - 1);
    if (u & bit) throw ParseError("repeated coordinate in subset key: " + key);
    u |= bit;
  }
  return u;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double parse_real(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw ParseError("bad number: " + s);
  return v;
}

}  // namespace

std::string weights_to_json(const WeightModel& m) {
  json j;
  j["d"] = m.dimension();
  switch (m.kind()) {
    case WeightKind::Product:
      j["kind"] = "product";
      j["gammas"] = string_array(m.product_gammas());
      break;
    case WeightKind::OrderDependent:
      j["kind"] = "order_dependent";
      j["order_factors"] = string_array(m.order_factors());
      break;
    case WeightKind::POD:
      j["kind"] = "pod";
      j["gammas"] = string_array(m.product_gammas());
      j["order_factors"] = string_array(m.order_factors());
      break;
    case WeightKind::ExplicitGeneral: {
      j["kind"] = "explicit_general";
      json table = json::object();
      for (const auto& [u, g] : m.table())
        if (u != 0 && g != 0.0) table[subset_key(u, m.dimension())] = format_double(g);
      j["table"] = std::move(table);
      break;
    }
  }
  return j.dump();
}

WeightModel weights_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    const std::string kind = j.at("kind").get<std::string>();
    const int d = j.at("d").get<int>();
    const auto checked = [d](WeightModel m) {
      if (m.dimension() != d)
        throw ParseError("declared dimension " + std::to_string(d) + " does not match " +
                         std::to_string(m.dimension()) + " weights");
      return m;
    };
    if (kind == "product") return checked(WeightModel::product(weight_array(j.at("gammas"))));
    if (kind == "order_dependent")
      return WeightModel::order_dependent(d, weight_array(j.at("order_factors")));
    if (kind == "pod")
      return checked(
          WeightModel::pod(weight_array(j.at("gammas")), weight_array(j.at("order_factors"))));
    if (kind == "explicit_general") {
      const json& t = j.at("table");
      if (!t.is_object()) throw ParseError("table must be an object");
      std::map<std::uint64_t, double> table;
      for (const auto& [key, value] : t.items()) {
        const std::uint64_t u = subset_mask(key, d);
        const double g = weight_value(value);
        if (u == 0) {
          if (g != 1.0) throw ParseError("the empty-set weight is fixed at 1");
          continue;
        }
        table[u] = g;
      }
      return WeightModel::explicit_general(d, std::move(table));
    }
    throw ParseError("unknown weight kind: " + kind);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("weight config: ") + e.what());
  }
}

std::uint64_t weight_model_hash(const WeightModel& m) { return fnv1a64(weights_to_json(m)); }

std::string vector_file_text(const GeneratingVector& gv, const VectorFileMetadata& meta) {
  std::ostringstream os;
  os << gv.dim() << ' ' << gv.n << '\n';
  for (int j = 0; j < gv.dim(); ++j) os << (j ? " " : "") << gv.z[j];
  os << '\n';
  if (meta.alpha) os << "# alpha=" << format_double(*meta.alpha) << '\n';
  if (meta.weight_hash) os << "# weight_hash=" << hash_hex(*meta.weight_hash) << '\n';
  if (meta.criterion) os << "# criterion=" << format_double(*meta.criterion) << '\n';
  return os.str();
}

void write_vector_file(const std::string& path, const GeneratingVector& gv,
                       const VectorFileMetadata& meta) {
  write_text_file(path, vector_file_text(gv, meta));
}

GeneratingVector read_vector_file(const std::string& path, VectorFileMetadata* meta) {
  std::istringstream is(read_text_file(path));
  std::string line;
  if (!std::getline(is, line)) throw ParseError("vector file is empty: " + path);
  std::istringstream header(line);
  int d = 0;
  int n = 0;
  if (!(header >> d >> n) || d < 1) throw ParseError("bad vector file header: " + line);
  if (!std::getline(is, line)) throw ParseError("vector file has no component line: " + path);
  std::istringstream comps(line);
  std::vector<int> z(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j)
    if (!(comps >> z[j])) throw ParseError("vector file needs " + std::to_string(d) + " components");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] != '#') throw ParseError("unexpected line in vector file: " + line);
    std::size_t start = 1;
    while (start < line.size() && line[start] == ' ') ++start;
    const std::size_t eq = line.find('=', start);
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(start, eq - start);
    const std::string value = line.substr(eq + 1);
    if (meta == nullptr) continue;
    if (key == "alpha") {
      meta->alpha = parse_real(value);
    } else if (key == "weight_hash") {
      char* end = nullptr;
      meta->weight_hash = std::strtoull(value.c_str(), &end, 16);
      if (end == value.c_str() || *end != '\0') throw ParseError("bad weight hash: " + value);
    } else if (key == "criterion") {
      meta->criterion = parse_real(value);
    }
  }
  return make_generating_vector(n, std::move(z));
}

void write_index_dump(std::ostream& os, const IndexSet& A, std::uint64_t weight_hash) {
  os << "# d=" << A.params.d << " M=" << format_double(A.M) << " weight_hash=" << hash_hex(weight_hash)
     << '\n';
  for (const FrequencyIndex& h : A.indices) {
    for (int j = 0; j < h.dim(); ++j) os << (j ? "\t" : "") << h.h[j];
    os << '\n';
  }
}

void write_coefficients_csv(std::ostream& os, const FourierPolynomial& f) {
  for (int j = 1; j <= f.dim(); ++j) os << 'h' << j << ',';
  os << "re,im\n";
  for (const auto& [h, c] : f.terms()) {
    for (int hj : h) os << hj << ',';
    os << format_double(c.real()) << ',' << format_double(c.imag()) << '\n';
  }
}

TestFunctionSpec test_function_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    TestFunctionSpec spec;
    spec.kind = j.at("kind").get<std::string>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    const json params = j.value("parameters", json::object());
    if (spec.kind == "random_polynomial") {
      spec.M = weight_value(params.at("M"));
      if (!(spec.M >= 1.0)) throw ParseError("random polynomial needs a cutoff M >= 1");
    } else if (spec.kind == "kernel_product") {
      spec.coefficients = weight_array(params.at("coefficients"));
    } else {
      throw ParseError("unknown test function kind: " + spec.kind);
    }
    return spec;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("test function config: ") + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed on " + path);
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed on " + path);
}

}  // namespace lattice
