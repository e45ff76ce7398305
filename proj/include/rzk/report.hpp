#pragma once

#include "json.hpp"
#include "rzk/logic.hpp"
#include "rzk/small_maps.hpp"
#include "rzk/suites.hpp"

namespace rzk {

// stable field order everywhere: reports must be byte-identical across runs
using Json = nlohmann::ordered_json;

Json term_json(const Term& t);
Json verdict_json(Verdict v);
Json prop_json(const Prop1& p);
Json nested_json(const NestedProp& np);
Json predicate_json(const Predicate& phi);
Json entailment_json(const EntailmentReport& rep);
Json suite_json(const SuiteReport& rep);
Json axiom_suite_json(const AxiomSuiteReport& rep);

}  // namespace rzk
