#include "uq/io.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace uq {

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}

Json vector_to_json(const Vector& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const Json& arr) {
  Vector v(static_cast<Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Index>(i)] = arr[i].get<double>();
  return v;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) rows.push_back(vector_to_json(m.row(r)));
  return rows;
}

Matrix matrix_from_json(const Json& rows) {
  const Index nr = static_cast<Index>(rows.size());
  if (nr == 0) return Matrix(0, 0);
  const Index nc = static_cast<Index>(rows[0].size());
  Matrix m(nr, nc);
  for (Index r = 0; r < nr; ++r) {
    if (static_cast<Index>(rows[static_cast<std::size_t>(r)].size()) != nc)
      throw std::invalid_argument("matrix json: ragged rows");
    for (Index c = 0; c < nc; ++c) m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

std::string family_name(PolyFamily f) {
  return f == PolyFamily::HermiteProbabilist ? "hermite" : "legendre";
}

PolyFamily family_from_name(const std::string& s) {
  if (s == "hermite") return PolyFamily::HermiteProbabilist;
  if (s == "legendre") return PolyFamily::Legendre;
  throw std::invalid_argument("unknown polynomial family: " + s);
}

Json families_to_json(const std::vector<PolyFamily>& fams) {
  Json arr = Json::array();
  for (PolyFamily f : fams) arr.push_back(family_name(f));
  return arr;
}

std::vector<PolyFamily> families_from_json(const Json& arr) {
  std::vector<PolyFamily> fams;
  for (const auto& f : arr) fams.push_back(family_from_name(f.get<std::string>()));
  return fams;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Matrix& data) {
  if (static_cast<Index>(header.size()) != data.cols())
    throw std::invalid_argument("write_csv: header width does not match data");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_csv: cannot open " + path);
  for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
  os << "\r\n";
  for (Index r = 0; r < data.rows(); ++r) {
    for (Index c = 0; c < data.cols(); ++c) os << (c ? "," : "") << format_double(data(r, c));
    os << "\r\n";
  }
  if (!os) throw std::runtime_error("write_csv: write failed for " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_csv: cannot open " + path);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("read_csv: empty file " + path);
  CsvTable table;
  table.header = split_record(line);
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split_record(line);
    if (fields.size() != table.header.size())
      throw std::runtime_error("read_csv: ragged row in " + path);
    std::vector<double> row;
    for (const auto& f : fields) {
      double v = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc()) throw std::runtime_error("read_csv: bad number '" + f + "'");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  table.data.resize(static_cast<Index>(rows.size()), static_cast<Index>(table.header.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      table.data(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
  return table;
}

Json to_json(const InputModel& model) {
  Json j;
  Json marginals = Json::array();
  for (const Marginal& m : model.marginals()) {
    Json mj;
    mj["kind"] = m.kind_name();
    mj["a"] = m.param_a();
    mj["b"] = m.param_b();
    if (m.moments()) {
      mj["moments"] = {{"mean", m.moments()->mean},
                       {"cov", m.moments()->cov},
                       {"std", m.moments()->stddev}};
    }
    marginals.push_back(std::move(mj));
  }
  j["marginals"] = std::move(marginals);
  if (!model.independent()) j["correlation"] = matrix_to_json(model.correlation());
  return j;
}

std::shared_ptr<const InputModel> input_model_from_json(const Json& j) {
  std::vector<Marginal> marginals;
  for (const auto& mj : j.at("marginals")) {
    const std::string kind = mj.at("kind").get<std::string>();
    const double a = mj.at("a").get<double>();
    const double b = mj.at("b").get<double>();
    if (kind == "lognormal")
      marginals.push_back(Marginal::lognormal(a, b));
    else if (kind == "gumbel")
      marginals.push_back(Marginal::gumbel(a, b));
    else if (kind == "truncated-gaussian")
      marginals.push_back(Marginal::truncated_gaussian(a, b));
    else if (kind == "uniform")
      marginals.push_back(Marginal::uniform(a, b));
    else if (kind == "gaussian")
      marginals.push_back(Marginal::gaussian(a, b));
    else
      throw std::invalid_argument("unknown marginal kind: " + kind);
  }
  Matrix corr;
  if (j.contains("correlation")) corr = matrix_from_json(j.at("correlation"));
  return std::make_shared<InputModel>(std::move(marginals), std::move(corr));
}

Json to_json(const LraModel& model) {
  Json j;
  j["type"] = "lra";
  j["families"] = families_to_json(model.families);
  j["degrees"] = model.degrees;
  j["weights"] = vector_to_json(model.weights);
  Json terms = Json::array();
  for (const RankOneTerm& t : model.terms) {
    Json zs = Json::array();
    for (const Vector& z : t.z) zs.push_back(vector_to_json(z));
    terms.push_back(Json{{"z", std::move(zs)}});
  }
  j["terms"] = std::move(terms);
  if (model.input) j["input_model"] = to_json(*model.input);
  return j;
}

LraModel lra_from_json(const Json& j) {
  if (j.at("type").get<std::string>() != "lra")
    throw std::invalid_argument("lra_from_json: wrong type tag");
  LraModel model;
  model.families = families_from_json(j.at("families"));
  model.degrees = j.at("degrees").get<std::vector<int>>();
  model.weights = vector_from_json(j.at("weights"));
  for (const auto& tj : j.at("terms")) {
    RankOneTerm term;
    for (const auto& zj : tj.at("z")) term.z.push_back(vector_from_json(zj));
    model.terms.push_back(std::move(term));
  }
  if (j.contains("input_model")) model.input = input_model_from_json(j.at("input_model"));
  if (model.weights.size() != static_cast<Index>(model.terms.size()))
    throw std::invalid_argument("lra_from_json: weight/term count mismatch");
  return model;
}

Json to_json(const PceModel& model) {
  Json j;
  j["type"] = "pce";
  j["families"] = families_to_json(model.families);
  Json idx = Json::array();
  for (const MultiIndexVec& a : model.indices) idx.push_back(a);
  j["indices"] = std::move(idx);
  j["coefficients"] = vector_to_json(model.coefficients);
  j["loo"] = {{"absolute", model.loo.absolute},
              {"corrected", model.loo.corrected},
              {"relative", model.loo.relative},
              {"relative_corrected", model.loo.relative_corrected},
              {"excluded_points", model.loo.excluded_points},
              {"degenerate", model.loo.degenerate},
              {"rank_deficient", model.loo.rank_deficient}};
  if (model.input) j["input_model"] = to_json(*model.input);
  return j;
}

PceModel pce_from_json(const Json& j) {
  if (j.at("type").get<std::string>() != "pce")
    throw std::invalid_argument("pce_from_json: wrong type tag");
  PceModel model;
  model.families = families_from_json(j.at("families"));
  for (const auto& a : j.at("indices")) model.indices.push_back(a.get<MultiIndexVec>());
  model.coefficients = vector_from_json(j.at("coefficients"));
  const Json& loo = j.at("loo");
  model.loo.absolute = loo.at("absolute").get<double>();
  model.loo.corrected = loo.at("corrected").get<double>();
  model.loo.relative = loo.at("relative").get<double>();
  model.loo.relative_corrected = loo.at("relative_corrected").get<double>();
  model.loo.excluded_points = loo.at("excluded_points").get<Index>();
  model.loo.degenerate = loo.at("degenerate").get<bool>();
  model.loo.rank_deficient = loo.at("rank_deficient").get<bool>();
  if (j.contains("input_model")) model.input = input_model_from_json(j.at("input_model"));
  if (model.coefficients.size() != static_cast<Index>(model.indices.size()))
    throw std::invalid_argument("pce_from_json: coefficient/index count mismatch");
  return model;
}

Json to_json(const EoleField& field) {
  Json j;
  j["type"] = "eole";
  j["grid"] = matrix_to_json(field.grid);
  j["corr_length"] = field.corr_length;
  j["eigenvalues"] = vector_to_json(field.eigenvalues);
  j["eigenvectors"] = matrix_to_json(field.eigenvectors);
  j["modes"] = field.modes;
  j["variance_fraction"] = field.variance_fraction;
  j["a_kappa"] = field.a_kappa;
  j["b_kappa"] = field.b_kappa;
  return j;
}

EoleField eole_from_json(const Json& j) {
  if (j.at("type").get<std::string>() != "eole")
    throw std::invalid_argument("eole_from_json: wrong type tag");
  EoleField field;
  field.grid = matrix_from_json(j.at("grid"));
  field.corr_length = j.at("corr_length").get<double>();
  field.eigenvalues = vector_from_json(j.at("eigenvalues"));
  field.eigenvectors = matrix_from_json(j.at("eigenvectors"));
  field.modes = j.at("modes").get<Index>();
  field.variance_fraction = j.at("variance_fraction").get<double>();
  field.a_kappa = j.at("a_kappa").get<double>();
  field.b_kappa = j.at("b_kappa").get<double>();
  return field;
}

TrussGeometry truss_geometry_from_json(const Json& j) {
  TrussGeometry g;
  g.nodes = matrix_from_json(j.at("nodes"));
  for (const auto& e : j.at("elements")) {
    if (e.size() != 3) throw std::invalid_argument("truss geometry: element needs [i, j, group]");
    g.elements.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>()});
  }
  for (const auto& f : j.at("fixed_dofs")) {
    if (f.size() != 2) throw std::invalid_argument("truss geometry: fixed dof needs [node, dir]");
    g.fixed_dofs.push_back({f[0].get<int>(), f[1].get<int>()});
  }
  g.load_nodes = j.at("load_nodes").get<std::vector<int>>();
  g.monitored_node = j.at("monitored_node").get<int>();
  return g;
}

Json to_json(const TrussGeometry& geometry) {
  Json j;
  j["nodes"] = matrix_to_json(geometry.nodes);
  Json elems = Json::array();
  for (const auto& e : geometry.elements) elems.push_back({e[0], e[1], e[2]});
  j["elements"] = std::move(elems);
  Json fixed = Json::array();
  for (const auto& f : geometry.fixed_dofs) fixed.push_back({f[0], f[1]});
  j["fixed_dofs"] = std::move(fixed);
  j["load_nodes"] = geometry.load_nodes;
  j["monitored_node"] = geometry.monitored_node;
  return j;
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_json_file: cannot open " + path);
  os << j.dump(2) << "\n";
  if (!os) throw std::runtime_error("write_json_file: write failed for " + path);
}

Json read_json_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_json_file: cannot open " + path);
  return Json::parse(is);
}

namespace {

void validate_node(const Json& value, const Json& schema, const std::string& where) {
  if (schema.contains("type")) {
    const std::string type = schema.at("type").get<std::string>();
    bool ok = false;
    if (type == "object") ok = value.is_object();
    else if (type == "array") ok = value.is_array();
    else if (type == "string") ok = value.is_string();
    else if (type == "number") ok = value.is_number();
    else if (type == "integer") ok = value.is_number_integer();
    else if (type == "boolean") ok = value.is_boolean();
    else if (type == "null") ok = value.is_null();
    else throw std::invalid_argument("schema: unsupported type '" + type + "' at " + where);
    if (!ok)
      throw std::runtime_error("schema violation at " + where + ": expected " + type);
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& option : schema.at("enum")) found = found || option == value;
    if (!found) throw std::runtime_error("schema violation at " + where + ": value not in enum");
  }
  if (value.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema.at("required"))
        if (!value.contains(key.get<std::string>()))
          throw std::runtime_error("schema violation at " + where + ": missing required key '" +
                                   key.get<std::string>() + "'");
    const bool closed = schema.contains("additionalProperties") &&
                        schema.at("additionalProperties").is_boolean() &&
                        !schema.at("additionalProperties").get<bool>();
    const Json props = schema.contains("properties") ? schema.at("properties") : Json::object();
    for (auto it = value.begin(); it != value.end(); ++it) {
      if (props.contains(it.key())) {
        validate_node(it.value(), props.at(it.key()), where + "." + it.key());
      } else if (closed) {
        throw std::runtime_error("schema violation at " + where + ": unexpected key '" + it.key() +
                                 "'");
      }
    }
  }
  if (value.is_array() && schema.contains("items")) {
    Index i = 0;
    for (const auto& item : value) {
      validate_node(item, schema.at("items"), where + "[" + std::to_string(i) + "]");
      ++i;
    }
  }
}

}  // namespace

void validate_against_schema(const Json& value, const Json& schema) {
  validate_node(value, schema, "$");
}

}  // namespace uq
