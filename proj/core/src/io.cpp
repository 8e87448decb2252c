#include "entkit/io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace entkit {

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

std::vector<PartySpace> parties_from_json(const json& j) {
  const auto& dims = j.at("dims");
  if (!dims.is_array() || dims.empty())
    throw std::runtime_error("state file needs a nonempty dims array");
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    labels = j.at("labels").get<std::vector<std::string>>();
    if (labels.size() != dims.size())
      throw std::runtime_error("labels and dims disagree in length");
  } else {
    if (dims.size() > 26)
      throw std::runtime_error("too many parties for default labels");
    for (std::size_t i = 0; i < dims.size(); ++i)
      labels.push_back(std::string(1, static_cast<char>('A' + i)));
  }
  std::vector<PartySpace> parties;
  for (std::size_t i = 0; i < dims.size(); ++i)
    parties.push_back({labels[i], dims[i].get<std::size_t>()});
  return parties;
}

std::vector<cplx> complex_list(const json& j, std::size_t expected,
                               const char* what) {
  if (!j.is_array() || j.size() != expected)
    throw std::runtime_error(std::string(what) + ": expected " +
                             std::to_string(expected) + " [re, im] pairs");
  std::vector<cplx> out;
  out.reserve(expected);
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2)
      throw std::runtime_error(std::string(what) +
                               ": entries must be [re, im] pairs");
    out.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  return out;
}

json complex_list_to_json(const std::vector<cplx>& values) {
  json out = json::array();
  for (const cplx& v : values) out.push_back({v.real(), v.imag()});
  return out;
}

AnyState state_from_json(const json& j, bool renormalize) {
  const std::string kind = j.at("kind").get<std::string>();
  const std::vector<PartySpace> parties = parties_from_json(j);
  const std::size_t dim = total_dim(parties);

  if (kind == "pure") {
    Vec amps = complex_list(j.at("amplitudes"), dim, "amplitudes");
    if (renormalize) {
      const double n = std::sqrt(norm_sq(amps));
      if (n < 1e-12) throw std::runtime_error("state vector is zero");
      for (cplx& x : amps) x /= n;
    }
    return PureState(parties, std::move(amps));
  }
  if (kind == "mixed") {
    const std::vector<cplx> flat =
        complex_list(j.at("entries"), dim * dim, "entries");
    Mat m(dim, dim);
    m.data() = flat;
    if (renormalize) {
      const double tr = trace(m).real();
      if (tr < 1e-12) throw std::runtime_error("density matrix has no trace");
      m *= cplx{1.0 / tr, 0.0};
    }
    return DensityOperator(parties, std::move(m));
  }
  throw std::runtime_error("unknown state kind: " + kind);
}

json state_to_json(const AnyState& state) {
  json j;
  const std::vector<PartySpace>& parties =
      std::holds_alternative<PureState>(state)
          ? std::get<PureState>(state).parties()
          : std::get<DensityOperator>(state).parties();
  j["labels"] = json::array();
  j["dims"] = json::array();
  for (const auto& p : parties) {
    j["labels"].push_back(p.label);
    j["dims"].push_back(p.dim);
  }
  if (std::holds_alternative<PureState>(state)) {
    j["kind"] = "pure";
    j["amplitudes"] =
        complex_list_to_json(std::get<PureState>(state).amplitudes());
  } else {
    j["kind"] = "mixed";
    j["entries"] =
        complex_list_to_json(std::get<DensityOperator>(state).matrix().data());
  }
  return j;
}

bool parse_maxent(const std::string& source, std::size_t& da,
                  std::size_t& db) {
  const std::string prefix = "maxent:";
  if (source.rfind(prefix, 0) != 0) return false;
  const std::string body = source.substr(prefix.size());
  const auto x = body.find('x');
  if (x == std::string::npos)
    throw std::runtime_error("maxent wants the form maxent:AxB");
  try {
    da = std::stoul(body.substr(0, x));
    db = std::stoul(body.substr(x + 1));
  } catch (const std::exception&) {
    throw std::runtime_error("maxent wants numeric dimensions");
  }
  return true;
}

}  // namespace

AnyState load_state(const std::string& source, bool renormalize) {
  if (source == "phi") return make_phi();
  if (source == "mixed") return make_mixed_example();
  if (source.rfind("bell", 0) == 0 && source.size() == 5 &&
      source[4] >= '0' && source[4] <= '3')
    return make_bell(source[4] - '0');
  std::size_t da = 0, db = 0;
  if (parse_maxent(source, da, db)) return make_max_entangled(da, db);
  return state_from_json(read_json_file(source), renormalize);
}

void save_state(const AnyState& state, const std::string& path) {
  write_json_file(state_to_json(state), path);
}

namespace {

ProtocolNode node_from_json(const json& j) {
  ProtocolNode node;
  if (!j.is_object()) throw std::runtime_error("protocol node must be an object");
  if (!j.contains("party")) {
    if (!j.empty())
      throw std::runtime_error("protocol leaf must be an empty object");
    return node;
  }

  Instrument ins;
  ins.party = j.at("party").get<std::string>();
  const json& ops = j.at("operators");
  if (!ops.is_object() || ops.empty())
    throw std::runtime_error("operators must be a nonempty object");
  const json no_children = json::object();
  const json& children =
      j.contains("children") ? j.at("children") : no_children;
  if (!children.is_object())
    throw std::runtime_error("children must be an object");
  // Missing or empty children marks a final measurement round.
  const bool terminal = children.empty();
  if (!terminal && children.size() != ops.size())
    throw std::runtime_error("children must mirror the operator labels");

  // json objects iterate in sorted key order, which fixes the outcome order.
  for (const auto& [label, flat] : ops.items()) {
    if (!terminal && !children.contains(label))
      throw std::runtime_error("outcome " + label + " has no child node");
    const std::size_t len = flat.is_array() ? flat.size() : 0;
    const auto d = static_cast<std::size_t>(std::llround(std::sqrt(
        static_cast<double>(len))));
    if (d == 0 || d * d != len)
      throw std::runtime_error("operator " + label +
                               " must be a flat square matrix");
    const std::vector<cplx> entries = complex_list(flat, len, "operator");
    Mat k(d, d);
    k.data() = entries;
    ins.operators.emplace_back(label, std::move(k));
    if (!terminal)
      node.children.emplace_back(label, node_from_json(children.at(label)));
  }
  node.instrument = std::move(ins);
  return node;
}

json node_to_json(const ProtocolNode& node) {
  json j = json::object();
  if (node.is_leaf()) return j;
  j["party"] = node.instrument->party;
  json ops = json::object();
  for (const auto& [label, k] : node.instrument->operators)
    ops[label] = complex_list_to_json(k.data());
  j["operators"] = std::move(ops);
  if (!node.children.empty()) {
    json children = json::object();
    for (const auto& [label, child] : node.children)
      children[label] = node_to_json(child);
    j["children"] = std::move(children);
  }
  return j;
}

}  // namespace

Protocol load_protocol(const std::string& source) {
  if (source == "phi") return collaboration_protocol_phi();
  if (source == "mixed") return collaboration_protocol_mixed();
  return Protocol{node_from_json(read_json_file(source))};
}

void save_protocol(const Protocol& protocol, const std::string& path) {
  write_json_file(node_to_json(protocol.root), path);
}

}  // namespace entkit
