// variable-set automata: NFAs over the alphabet extended with variable
// open/close markers, plus the closure operations on them

#ifndef SPANNERS_VSA_HPP
#define SPANNERS_VSA_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spanners/core.hpp"
#include "spanners/nfa.hpp"

namespace spanners {

struct Transition {
    int from = 0;
    Label label;
    int to = 0;
    auto operator<=>(const Transition&) const = default;
};

struct Vsa {
    std::string sigma;              // sorted, unique
    std::vector<std::string> vars;  // sorted, unique
    int n_states = 0;
    int initial = 0;
    std::vector<int> finals;
    std::vector<Transition> transitions;
    // optional output key per final state
    std::map<int, std::string> annotations;
};

// caps shared by the searches below
struct Limits {
    int state_cap = 100000;
    long long visit_cap = 4000000;
    int result_cap = 100000;
    int witness_cap = 10000;
};

// structural sanity: ids in range, labels well formed, vars declared
void validate(const Vsa& a);

Vsa vsa_from_json(const nlohmann::json& j);
nlohmann::ordered_json vsa_to_json(const Vsa& a);
Vsa load_vsa_file(const std::string& path);

bool is_final(const Vsa& a, int q);
Vsa eliminate_eps(const Vsa& a);
Vsa trim_vsa(const Vsa& a);

// every accepted marker word is well formed for all declared variables
bool functionality_check(const Vsa& a);
bool is_weakly_deterministic(const Vsa& a);
bool is_deterministic(const Vsa& a);
bool certify_dfvsa(const Vsa& a);

// equivalent deterministic functional automaton whose accepted words
// carry the markers of each boundary as one sorted block
Vsa normalize(const Vsa& a, const Limits& lim = {});

SpanRelation evaluate(const Vsa& a, const std::string& doc, const Limits& lim = {});

Vsa vsa_union(const Vsa& a, const Vsa& b);
Vsa projection(const Vsa& a, const std::vector<std::string>& keep);
Vsa vsa_join(const Vsa& a, const Vsa& b, const Limits& lim = {});
// one operand must be variable free
Vsa vsa_concat(const Vsa& a, const Vsa& b);
Vsa rename_var(const Vsa& a, const std::string& from, const std::string& to);

// variable status per state of a trimmed deterministic functional
// automaton: 0 waiting, 1 open, 2 closed; unique per state there
std::vector<std::vector<uint8_t>> state_configs(const Vsa& a);

// dense integer ids for labels, shared across automata so language
// level products line up
struct SymTable {
    std::vector<Label> syms;
    std::map<Label, int> ids;
    int id(const Label& l);
    int find(const Label& l) const;  // -1 when absent
};

// pre: a has no eps transitions
Nfa ref_nfa(const Vsa& a, SymTable& tab);
RefWord word_of_ids(const std::vector<int>& w, const SymTable& tab);

// fresh variable name not in taken, derived from base
std::string fresh_var(const std::string& base, const std::vector<std::string>& taken);

}  // namespace spanners

#endif
