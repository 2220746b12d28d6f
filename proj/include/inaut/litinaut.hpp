// Copyright 2026 The INAUT Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// LitINAUT: conjunction, relative-clause aggregation, subject pronouns and
// contextual omission over realized INAUT clauses. Every sentence keeps the
// clauses it was built from, so merges can be undone.
#ifndef INAUT_LITINAUT_HPP_
#define INAUT_LITINAUT_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "inaut/kb.hpp"
#include "inaut/nlg.hpp"
#include "json.hpp"

namespace inaut::lit {

struct LitSentence {
  std::vector<nlg::Clause> conjuncts;     // same subject and verb
  std::optional<nlg::Clause> relative;    // attached after the final NP
  bool pronoun = false;
  std::string omitted_prefix;
  size_t component = 0;

  const nlg::Clause &head() const { return conjuncts.front(); }
  const std::string &subject_ref() const { return head().subject_ref; }
  std::string final_referent() const;
  std::map<std::string, kb::Agreement> core_referents() const;
  std::string text() const;
  // The INAUT sentences this one was built from.
  std::vector<std::string> inaut() const;
};

using SentenceChain = std::vector<LitSentence>;

SentenceChain make_chain(const nlg::GenerationPlan &plan);
SentenceChain make_chain(const std::vector<nlg::Clause> &clauses, size_t component = 0);

SentenceChain merge_conjunction(SentenceChain chain);
SentenceChain merge_relative(SentenceChain chain);
SentenceChain gen_referring(SentenceChain chain);
SentenceChain contextual_omission(SentenceChain chain, const std::string &prefix);

// Rules applied in `weights.litinaut_rules` order; omission uses the prefix
// configured for `leaf_type`.
SentenceChain apply_rules(SentenceChain chain, const nlg::WeightConfig &weights,
                          const std::string &leaf_type);

std::string chain_text(const SentenceChain &chain);
std::vector<std::string> de_aggregate(const SentenceChain &chain);

std::string to_litinaut(const nlg::GenerationPlan &plan, const nlg::WeightConfig &weights);

struct EntityLink {
  std::string name;
  std::string instance_id;
  std::string area;  // area node id
};

// Bracketed names of `text`, first occurrence order, resolved against the KB.
std::vector<EntityLink> entity_links(const std::string &text, const kb::KnowledgeBase &kb);
nlohmann::json entity_links_json(const std::string &text, const kb::KnowledgeBase &kb);
// HTML paragraph; bracketed entities become links.
std::string to_html(const std::string &text, const kb::KnowledgeBase &kb);

}  // namespace inaut::lit

#endif  // INAUT_LITINAUT_HPP_
