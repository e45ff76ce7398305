#include "rzk/report.hpp"

namespace rzk {

Json term_json(const Term& t) { return to_string(t); }

Json verdict_json(Verdict v) { return to_string(v); }

Json prop_json(const Prop1& p) {
  Json j;
  switch (p.kind()) {
    case Prop1::Kind::Base: {
      j["kind"] = "base";
      Json w = Json::array();
      for (const Term& t : p.base_witnesses()) w.push_back(to_string(t));
      j["witnesses"] = std::move(w);
      break;
    }
    case Prop1::Kind::FullA: j["kind"] = "full"; break;
    case Prop1::Kind::FullSub: j["kind"] = "fullsub"; break;
    case Prop1::Kind::Imp:
      j["kind"] = "imp";
      j["lhs"] = prop_json(p.lhs());
      j["rhs"] = prop_json(p.rhs());
      break;
    case Prop1::Kind::Conj:
      j["kind"] = "conj";
      j["lhs"] = prop_json(p.lhs());
      j["rhs"] = prop_json(p.rhs());
      break;
    case Prop1::Kind::Disj:
      j["kind"] = "disj";
      j["lhs"] = prop_json(p.lhs());
      j["rhs"] = prop_json(p.rhs());
      break;
    case Prop1::Kind::Inter:
    case Prop1::Kind::Union: {
      j["kind"] = p.kind() == Prop1::Kind::Inter ? "inter" : "union";
      Json parts = Json::array();
      for (const Prop1& q : p.parts()) parts.push_back(prop_json(q));
      j["parts"] = std::move(parts);
      break;
    }
  }
  if (!p.attached().empty()) {
    Json a = Json::array();
    for (const Term& t : p.attached()) a.push_back(to_string(t));
    j["attached"] = std::move(a);
  }
  return j;
}

Json nested_json(const NestedProp& np) {
  Json j;
  j["pot"] = prop_json(np.pot);
  j["act"] = prop_json(np.act);
  return j;
}

Json predicate_json(const Predicate& phi) {
  Json j;
  Json idx = Json::array();
  for (const auto& i : phi.index) idx.push_back(i);
  j["index"] = std::move(idx);
  Json at = Json::object();
  for (const auto& i : phi.index) at[i] = nested_json(phi.fiber(i));
  j["fibers"] = std::move(at);
  return j;
}

Json entailment_json(const EntailmentReport& rep) {
  Json j;
  j["verdict"] = to_string(rep.holds);
  if (rep.realizer) j["realizer"] = to_string(*rep.realizer);
  if (!rep.note.empty()) j["note"] = rep.note;
  Json ev = Json::array();
  for (const auto& c : rep.evidence) {
    Json e;
    e["index"] = c.index;
    e["level"] = c.level;
    e["witness"] = to_string(c.witness);
    e["verdict"] = to_string(c.verdict);
    ev.push_back(std::move(e));
  }
  j["evidence"] = std::move(ev);
  return j;
}

Json suite_json(const SuiteReport& rep) {
  Json j;
  j["suite"] = rep.suite;
  j["yes"] = rep.yes;
  j["no"] = rep.no;
  j["unknown"] = rep.unknown;
  Json failures = Json::array();
  for (const auto& c : rep.checks) {
    if (c.verdict == Verdict::Yes) continue;
    Json f;
    f["name"] = c.name;
    f["verdict"] = to_string(c.verdict);
    if (!c.detail.empty()) f["detail"] = c.detail;
    failures.push_back(std::move(f));
  }
  j["failures"] = std::move(failures);
  return j;
}

Json axiom_suite_json(const AxiomSuiteReport& rep) {
  Json j;
  Json axioms = Json::array();
  for (const auto& a : rep.axioms) {
    Json e;
    e["axiom"] = a.axiom;
    e["instances"] = a.instances;
    e["failures"] = a.failures;
    Json notes = Json::array();
    for (const auto& n : a.notes) notes.push_back(n);
    e["notes"] = std::move(notes);
    axioms.push_back(std::move(e));
  }
  j["axioms"] = std::move(axioms);
  j["deviation"] = rep.deviation;
  j["pass"] = rep.all_pass();
  return j;
}

}  // namespace rzk
