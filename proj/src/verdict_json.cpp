#include "commtask/verdict_json.hpp"

#include "commtask/matrix_json.hpp"

namespace commtask {

namespace {

nlohmann::json certificate_json(const Certificate &c) {
  struct Visitor {
    nlohmann::json operator()(std::monostate) const { return nullptr; }
    nlohmann::json operator()(const MonotoneSeparation &s) const {
      return {{"type", "monotone"},
              {"name", s.name},
              {"value_on_c", to_string(s.value_on_c)},
              {"value_on_d", to_string(s.value_on_d)}};
    }
    nlohmann::json operator()(const ExactWitness &) const { return {{"type", "witness"}}; }
    nlohmann::json operator()(const BranchBoundBound &b) const {
      return {{"type", "branch_and_bound"}, {"bound", to_string(b.bound)}, {"nodes", b.nodes}};
    }
    nlohmann::json operator()(const ClosedForm &f) const {
      return {{"type", "closed_form"}, {"rule", f.rule}};
    }
  };
  return std::visit(Visitor{}, c);
}

} // namespace

nlohmann::json to_json(const Verdict &v) {
  nlohmann::json j;
  j["outcome"] = outcome_name(v.outcome);
  j["certificate"] = certificate_json(v.certificate);
  j["witness"] = v.witness ? to_json(*v.witness) : nlohmann::json(nullptr);
  j["residual"] = v.residual;
  j["lower_bound"] = v.lower_bound ? nlohmann::json(to_string(*v.lower_bound)) : nlohmann::json(nullptr);
  j["nodes"] = v.nodes;
  j["elapsed_ms"] = v.elapsed_ms;
  return j;
}

nlohmann::json to_json(const EquivalenceVerdict &v) {
  return {{"outcome", equivalence_name(v.outcome)},
          {"c_below_d", to_json(v.c_below_d)},
          {"d_below_c", to_json(v.d_below_c)}};
}

std::string equivalence_name(Equivalence e) {
  switch (e) {
  case Equivalence::Equivalent:
    return "Equivalent";
  case Equivalence::NotEquivalent:
    return "NotEquivalent";
  case Equivalence::Unknown:
    break;
  }
  return "Unknown";
}

} // namespace commtask
