#include "pathforge/testcase.hpp"

#include <json.hpp>
#include <sstream>

namespace pathforge {

namespace {

using ordered_json = nlohmann::ordered_json;

ConcreteValue scalar_from_value(const Value& v, Scalar want) {
  switch (want) {
    case Scalar::Int:
      if (v.kind == Value::Kind::Real) return ConcreteValue::of_int(v.r.floor());
      if (v.kind == Value::Kind::Bool) return ConcreteValue::of_int(v.b ? 1 : 0);
      return ConcreteValue::of_int(v.i);
    case Scalar::Float:
      if (v.kind == Value::Kind::Real) return ConcreteValue::of_float(v.r.to_double());
      return ConcreteValue::of_float(static_cast<double>(v.i));
    case Scalar::Bool:
      if (v.kind == Value::Kind::Bool) return ConcreteValue::of_bool(v.b);
      return ConcreteValue::of_bool(v.i != 0);
  }
  return ConcreteValue::of_int(0);
}

Sort scalar_sort(Scalar s) {
  switch (s) {
    case Scalar::Int: return Sort::Int;
    case Scalar::Float: return Sort::Real;
    case Scalar::Bool: return Sort::Bool;
  }
  return Sort::Int;
}

}  // namespace

TestInput decode_model(const Model& model, const TypeEnv& env, const SmtScript& script) {
  TestInput input;
  for (const auto& pname : env.params) {
    const SubsetType& ty = env.of(pname);
    auto it = script.param_map.find(pname);
    if (it == script.param_map.end())
      throw DecodeError("parameter '" + pname + "' has no symbols in the script");
    const ParamSymbols& syms = it->second;

    if (!ty.is_list) {
      Value v = model.lookup(syms.value, scalar_sort(ty.elem));
      input.args.emplace_back(pname, scalar_from_value(v, ty.elem));
      continue;
    }

    Value len_v = model.lookup(syms.len, Sort::Int);
    long long len = len_v.kind == Value::Kind::Real ? len_v.r.floor() : len_v.i;
    if (len < 0)
      throw DecodeError("negative length " + std::to_string(len) + " for '" +
                        pname + "'");
    Value arr = model.lookup(syms.value, array_sort_of(scalar_sort(ty.elem)));
    std::vector<ConcreteValue> elems;
    elems.reserve(static_cast<size_t>(len));
    for (long long i = 0; i < len; i++)
      elems.push_back(scalar_from_value(arr.select(i), ty.elem));
    input.args.emplace_back(pname, ConcreteValue::of_list(std::move(elems)));
  }
  return input;
}

std::string path_id_of(const ExecutionPath& path) {
  std::string id = path.function + ":";
  for (const auto& s : path.steps) {
    if (s.kind != StepKind::Condition) continue;
    id += s.branch_taken.value_or(false) ? 'T' : 'F';
  }
  if (path.truncated) id += "~";
  return id;
}

TestArtifact emit_artifact(const TestInput& input, const FunctionDef& fn,
                           const ExecutionPath& path) {
  TestArtifact a;
  a.function = fn.name;
  a.input = input;
  a.path_id = path_id_of(path);
  std::string call = fn.name + "(";
  for (size_t i = 0; i < input.args.size(); i++) {
    if (i) call += ", ";
    call += render_literal(input.args[i].second);
  }
  call += ")";
  a.snippet = call;
  return a;
}

namespace {

ordered_json value_to_json(const ConcreteValue& v) {
  switch (v.kind) {
    case ConcreteValue::Kind::Int: return v.i;
    case ConcreteValue::Kind::Float: return v.f;
    case ConcreteValue::Kind::Bool: return v.b;
    case ConcreteValue::Kind::List: {
      ordered_json arr = ordered_json::array();
      for (const auto& e : v.list) arr.push_back(value_to_json(e));
      return arr;
    }
  }
  return nullptr;
}

ConcreteValue value_from_json(const ordered_json& j) {
  if (j.is_boolean()) return ConcreteValue::of_bool(j.get<bool>());
  if (j.is_number_integer()) return ConcreteValue::of_int(j.get<long long>());
  if (j.is_number_float()) return ConcreteValue::of_float(j.get<double>());
  if (j.is_array()) {
    std::vector<ConcreteValue> xs;
    for (const auto& e : j) xs.push_back(value_from_json(e));
    return ConcreteValue::of_list(std::move(xs));
  }
  throw DecodeError("unexpected value in artifact record");
}

}  // namespace

std::string artifact_to_json(const TestArtifact& a) {
  ordered_json j;
  j["function"] = a.function;
  j["file"] = a.file;
  ordered_json args = ordered_json::array();
  for (const auto& [name, v] : a.input.args) {
    ordered_json rec;
    rec["name"] = name;
    rec["value"] = value_to_json(v);
    args.push_back(rec);
  }
  j["args"] = args;
  j["path_id"] = a.path_id;
  j["verdict"] = a.verdict;
  j["snippet"] = a.snippet;
  return j.dump();
}

TestArtifact artifact_from_json(const std::string& line) {
  ordered_json j = ordered_json::parse(line);
  TestArtifact a;
  a.function = j.at("function").get<std::string>();
  a.file = j.at("file").get<std::string>();
  for (const auto& rec : j.at("args"))
    a.input.args.emplace_back(rec.at("name").get<std::string>(),
                              value_from_json(rec.at("value")));
  a.path_id = j.at("path_id").get<std::string>();
  a.verdict = j.at("verdict").get<std::string>();
  a.snippet = j.at("snippet").get<std::string>();
  return a;
}

}  // namespace pathforge
