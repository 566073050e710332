#ifndef TRANSDIFF_DEFAULT_RULES_HPP
#define TRANSDIFF_DEFAULT_RULES_HPP

#include <string>
#include <vector>

#include "transdiff/rules.hpp"

namespace transdiff {

// the shipped rule file; --rules replaces it wholesale
inline const std::string& default_ruleset_text() {
  static const std::string text = R"RULES(# Default category rules.
#
# Morpho-syntactic feature battery: seventeen slots. A slot can need more
# than one line because alternation items are single words.
# 1. copula/auxiliary absence
MS copula.absence SYM: {is|are|am|'s|'re|'m} => _
# 2. invariant "be"
MS be.invariant SYM: be => {is|are|am|was|were}
# 3. completive "done"
MS done.completive SYM: done => _
# 4. remote past "been"
MS been.remote-past SYM: been => {has|have} been
# 5. "ain't"
MS aint.be SYM: ain't => {isn't|aren't}
MS aint.am-not SYM: ain't => am not
MS aint.do SYM: ain't => {don't|doesn't|didn't}
MS aint.have SYM: ain't => {haven't|hasn't}
# 6. future "gon"
MS gon.gonna SYM: gon => gonna
MS gon.going-to SYM: gon => going to
# 7. "finna" / "fitna" / "fixing to"
MS finna.about-to SYM: {finna|fitna} => about to
MS finna.going-to SYM: {finna|fitna} => going to
MS finna.fixing-about SYM: fixing to => about to
MS finna.fixing-going SYM: fixing to => going to
# 8. verbal -s absence. 10. plural -s absence collapses onto the same
#    orthographic pattern, so it shares this line and is counted once.
MS verbal-s.absence SYM MINSTEM=3: $x => $x+s
# 9. possessive -s absence. A spaced possessive ("man 's") surfaces as a
#    bare 's insertion and is already caught by copula.absence.
MS poss-s.absence SYM MINSTEM=3: $x => $x+'s
# 11. demonstrative "them"
MS them-those.swap SYM: them => those
# 12. existential "it"
MS it-there.existential SYM: it => there
# 13. "y'all"
MS yall.you-all SYM: y'all => you all
MS yall.you-guys SYM: y'all => you guys
# 14. "imma"
MS imma.gonna SYM: {imma|i'ma} => i'm gonna
MS imma.going-to SYM: {imma|i'ma} => i'm going to
# 15. negative concord
MS negative-concord.any SYM: any => no
MS negative-concord.anything SYM: anything => nothing
MS negative-concord.anybody SYM: anybody => nobody
MS negative-concord.anyone SYM: anyone => no one
MS negative-concord.ever SYM: ever => never
# 16. "don't" leveling
MS dont-doesnt.leveling SYM: don't => doesn't
# 17. "was" leveling
MS was-were.leveling SYM: was => were
#
# Reductions: contraction templates.
RED contraction.will SYM: $x will => $x+'ll
RED contraction.are SYM: $x are => $x+'re
RED contraction.have SYM: $x have => $x+'ve
RED contraction.not SYM: $x not => $x+n't
RED contraction.is-has SYM: $x {is|has} => $x+'s
RED contraction.would-had-did SYM: $x {would|had|did} => $x+'d
RED contraction.cannot SYM: cannot => can't
)RULES";
  return text;
}

// reduced form vocabulary; --reduced-forms replaces it wholesale
inline const std::string& default_reduced_forms_text() {
  static const std::string text =
      "# reduced form\tfull form\n"
      "gonna\tgoing to\n"
      "wanna\twant to\n"
      "gotta\tgot to\n"
      "kinda\tkind of\n"
      "sorta\tsort of\n"
      "outta\tout of\n"
      "lotta\tlot of\n"
      "cause\tbecause\n"
      "'cause\tbecause\n"
      "tryna\ttrying to\n"
      "lemme\tlet me\n"
      "gimme\tgive me\n"
      "dunno\tdon't know\n"
      "til\tuntil\n"
      "'til\tuntil\n"
      "em\tthem\n"
      "'em\tthem\n"
      "cept\texcept\n";
  return text;
}

// shipped rules plus the reduced-form vocabulary, with file order running
// across both so tie-breaks stay well defined
inline std::vector<CategoryRule> combine_rules(std::vector<CategoryRule> rules,
                                               std::vector<CategoryRule> reduced) {
  for (auto& r : reduced) {
    r.order = static_cast<int>(rules.size());
    rules.push_back(std::move(r));
  }
  return rules;
}

inline std::vector<CategoryRule> default_rules() {
  return combine_rules(parse_ruleset(default_ruleset_text()),
                       rules_from_reduced_forms(default_reduced_forms_text()));
}

}  // namespace transdiff

#endif  // TRANSDIFF_DEFAULT_RULES_HPP
