#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

namespace sitcalc::sat {

// Literal encoding: 2*var for the positive literal, 2*var+1 for its negation.
using Lit = int;

inline Lit pos(int v) { return 2 * v; }
inline Lit neg(int v) { return 2 * v + 1; }
inline Lit negate(Lit l) { return l ^ 1; }
inline int var_of(Lit l) { return l >> 1; }
inline bool sign_of(Lit l) { return l & 1; }

using Clock = std::chrono::steady_clock;

enum class Result { Sat, Unsat, Unknown };

// Conflict-driven clause learning with two watched literals, first-UIP
// learning, activity-based branching, phase saving and Luby restarts.
// Clauses may be added between calls to solve().
class Solver {
public:
    int new_var();
    int num_vars() const { return static_cast<int>(assigns_.size()); }
    // Returns false once the clause set is unsatisfiable at level 0.
    bool add_clause(std::vector<Lit> lits);
    Result solve(const std::vector<Lit>& assumptions = {}, std::optional<Clock::time_point> deadline = {});
    bool model_value(int v) const { return model_[static_cast<std::size_t>(v)]; }
    bool ok() const { return ok_; }

private:
    enum : std::int8_t { kUndef = 0, kTrue = 1, kFalse = -1 };

    std::vector<std::vector<Lit>> clauses_;
    std::vector<std::vector<int>> watches_;  // by literal
    std::vector<std::int8_t> assigns_;
    std::vector<int> level_;
    std::vector<int> reason_;
    std::vector<bool> phase_;
    std::vector<double> activity_;
    std::vector<Lit> trail_;
    std::vector<int> trail_lim_;
    std::size_t qhead_ = 0;
    double var_inc_ = 1.0;
    bool ok_ = true;
    std::vector<bool> model_;
    std::vector<char> seen_;

    // Max-heap on activity.
    std::vector<int> heap_;
    std::vector<int> heap_pos_;

    std::int8_t value(Lit l) const {
        std::int8_t v = assigns_[static_cast<std::size_t>(var_of(l))];
        return sign_of(l) ? static_cast<std::int8_t>(-v) : v;
    }
    int decision_level() const { return static_cast<int>(trail_lim_.size()); }
    void enqueue(Lit l, int reason);
    int propagate();
    void analyze(int confl, std::vector<Lit>& learnt, int& bt_level);
    void cancel_until(int lvl);
    int attach(std::vector<Lit> c);
    void bump(int v);
    void heap_insert(int v);
    void heap_up(std::size_t i);
    void heap_down(std::size_t i);
    int heap_pop();
    Lit pick_branch();
};

}  // namespace sitcalc::sat
