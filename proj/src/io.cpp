#include "radapt/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "radapt/errors.hpp"

namespace radapt {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string dataset_to_csv(const DomainDataset& data) {
  std::ostringstream out;
  const Eigen::Index d = data.dim();
  for (Eigen::Index j = 0; j < d; ++j) out << "x_" << j << ",";
  out << "y\n";
  for (const auto& s : data.samples()) {
    for (Eigen::Index j = 0; j < d; ++j) out << format_double(s.x[j]) << ",";
    out << format_double(s.y) << "\n";
  }
  return out.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError("could not parse number: '" + s + "'");
  }
}

}  // namespace

DomainDataset dataset_from_csv(const std::string& text, DomainId id) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("dataset CSV: empty input");
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "y")
    throw IoError("dataset CSV: malformed header");
  const std::size_t dim = header.size() - 1;
  std::vector<LabeledSample> samples;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != dim + 1)
      throw IoError("dataset CSV: row has " + std::to_string(fields.size()) +
                    " fields, expected " + std::to_string(dim + 1));
    LabeledSample s;
    s.x.resize(static_cast<Eigen::Index>(dim));
    for (std::size_t j = 0; j < dim; ++j)
      s.x[static_cast<Eigen::Index>(j)] = parse_double(fields[j]);
    s.y = parse_double(fields[dim]);
    samples.push_back(std::move(s));
  }
  return DomainDataset(id, std::move(samples));
}

nlohmann::json domain_spec_to_json(const DomainSpec& spec) {
  nlohmann::json j;
  if (std::holds_alternative<GaussianDomainSpec>(spec)) {
    const auto& g = std::get<GaussianDomainSpec>(spec);
    j["type"] = "gaussian";
    j["input_mean"] = g.input_mean;
    j["input_var"] = g.input_var;
    j["dim"] = g.dim;
    j["beta_mean"] = g.beta_mean;
    j["beta_var"] = g.beta_var;
    j["noise_mean"] = g.noise_mean;
    j["noise_var"] = g.noise_var;
    return j;
  }
  const auto& d = std::get<DiscreteDomainSpec>(spec);
  j["type"] = "discrete";
  j["atoms"] = nlohmann::json::array();
  for (const auto& a : d.atoms()) {
    nlohmann::json atom;
    atom["x"] = std::vector<double>(a.z.x.data(), a.z.x.data() + a.z.x.size());
    atom["y"] = a.z.y;
    atom["p"] = a.probability;
    j["atoms"].push_back(atom);
  }
  return j;
}

DomainSpec domain_spec_from_json(const nlohmann::json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "gaussian") {
      GaussianDomainSpec g;
      g.input_mean = j.at("input_mean").get<double>();
      g.input_var = j.at("input_var").get<double>();
      g.dim = j.at("dim").get<Eigen::Index>();
      g.beta_mean = j.value("beta_mean", g.beta_mean);
      g.beta_var = j.value("beta_var", g.beta_var);
      g.noise_mean = j.value("noise_mean", g.noise_mean);
      g.noise_var = j.value("noise_var", g.noise_var);
      g.validate();
      return g;
    }
    if (type == "discrete") {
      std::vector<DiscreteDomainSpec::Atom> atoms;
      for (const auto& aj : j.at("atoms")) {
        DiscreteDomainSpec::Atom a;
        const auto xs = aj.at("x").get<std::vector<double>>();
        a.z.x = Eigen::Map<const Eigen::VectorXd>(xs.data(),
                                                  static_cast<Eigen::Index>(xs.size()));
        a.z.y = aj.at("y").get<double>();
        a.probability = aj.at("p").get<double>();
        atoms.push_back(std::move(a));
      }
      return DiscreteDomainSpec(std::move(atoms));
    }
    throw IoError("domain spec JSON: unknown type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("domain spec JSON: ") + e.what());
  }
}

namespace {

LossFunction loss_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (!j.contains("a") && !j.contains("b")) {
    if (kind == "squared") return LossFunction::squared_unclamped();
    throw IoError("loss JSON: absolute loss needs a clamp range");
  }
  const double a = j.at("a").get<double>();
  const double b = j.at("b").get<double>();
  if (kind == "squared") return LossFunction::squared(a, b);
  if (kind == "absolute") return LossFunction::absolute(a, b);
  throw IoError("loss JSON: unknown kind '" + kind + "'");
}

nlohmann::json loss_to_json(const LossFunction& loss) {
  nlohmann::json j;
  j["kind"] = loss.kind() == LossFunction::Kind::Squared ? "squared" : "absolute";
  if (loss.clamped()) {
    j["a"] = loss.lo();
    j["b"] = loss.hi();
  }
  return j;
}

}  // namespace

nlohmann::json linear_hypothesis_to_json(const LinearHypothesis& h) {
  nlohmann::json j;
  j["weights"] = std::vector<double>(h.weights.data(),
                                     h.weights.data() + h.weights.size());
  j["bias"] = h.bias;
  return j;
}

LinearHypothesis linear_hypothesis_from_json(const nlohmann::json& j) {
  LinearHypothesis h;
  const auto ws = j.at("weights").get<std::vector<double>>();
  h.weights = Eigen::Map<const Eigen::VectorXd>(ws.data(),
                                                static_cast<Eigen::Index>(ws.size()));
  h.bias = j.value("bias", 0.0);
  return h;
}

nlohmann::json finite_class_to_json(const FiniteHypothesisClass& klass) {
  nlohmann::json j;
  j["loss"] = loss_to_json(klass.loss());
  j["members"] = nlohmann::json::array();
  for (const auto& m : klass.members()) {
    if (std::holds_alternative<LinearHypothesis>(m)) {
      j["members"].push_back(linear_hypothesis_to_json(std::get<LinearHypothesis>(m)));
    } else {
      const auto& t = std::get<TabulatedHypothesis>(m);
      nlohmann::json tj;
      tj["table"] = nlohmann::json::array();
      for (std::size_t i = 0; i < t.points.size(); ++i) {
        nlohmann::json e;
        e["x"] = std::vector<double>(t.points[i].data(),
                                     t.points[i].data() + t.points[i].size());
        e["value"] = t.values[i];
        tj["table"].push_back(e);
      }
      j["members"].push_back(tj);
    }
  }
  return j;
}

FiniteHypothesisClass finite_class_from_json(const nlohmann::json& j) {
  try {
    const LossFunction loss = loss_from_json(j.at("loss"));
    std::vector<Hypothesis> members;
    for (const auto& mj : j.at("members")) {
      if (mj.contains("table")) {
        TabulatedHypothesis t;
        for (const auto& e : mj.at("table")) {
          const auto xs = e.at("x").get<std::vector<double>>();
          t.points.push_back(Eigen::Map<const Eigen::VectorXd>(
              xs.data(), static_cast<Eigen::Index>(xs.size())));
          t.values.push_back(e.at("value").get<double>());
        }
        members.push_back(std::move(t));
      } else {
        members.push_back(linear_hypothesis_from_json(mj));
      }
    }
    return FiniteHypothesisClass(std::move(members), loss);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("finite class JSON: ") + e.what());
  }
}

std::string tail_report_to_csv(const TailReport& report) {
  std::ostringstream out;
  out << "xi,empirical_p,wilson99,bound,pass\n";
  for (const auto& row : report.rows) {
    out << format_double(row.xi) << "," << format_double(row.empirical_p) << ","
        << format_double(row.wilson99) << "," << format_double(row.bound) << ","
        << (row.pass ? "true" : "false") << "\n";
  }
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace radapt
