#include "sat.hpp"

#include <algorithm>

namespace sitcalc::sat {

namespace {

double luby(double y, int x) {
    int size = 1, seq = 0;
    while (size < x + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        --seq;
        x = x % size;
    }
    double r = 1;
    for (int i = 0; i < seq; ++i) r *= y;
    return r;
}

}  // namespace

int Solver::new_var() {
    int v = num_vars();
    assigns_.push_back(kUndef);
    level_.push_back(0);
    reason_.push_back(-1);
    phase_.push_back(false);
    activity_.push_back(0.0);
    seen_.push_back(0);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_pos_.push_back(-1);
    heap_insert(v);
    return v;
}

int Solver::attach(std::vector<Lit> c) {
    int idx = static_cast<int>(clauses_.size());
    watches_[static_cast<std::size_t>(c[0])].push_back(idx);
    watches_[static_cast<std::size_t>(c[1])].push_back(idx);
    clauses_.push_back(std::move(c));
    return idx;
}

bool Solver::add_clause(std::vector<Lit> lits) {
    if (!ok_) return false;
    cancel_until(0);
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    std::vector<Lit> c;
    for (std::size_t i = 0; i < lits.size(); ++i) {
        if (i + 1 < lits.size() && lits[i + 1] == negate(lits[i])) return true;  // tautology
        auto v = value(lits[i]);
        if (v == kTrue) return true;
        if (v == kFalse) continue;
        c.push_back(lits[i]);
    }
    if (c.empty()) return ok_ = false;
    if (c.size() == 1) {
        enqueue(c[0], -1);
        if (propagate() >= 0) ok_ = false;
        return ok_;
    }
    attach(std::move(c));
    return true;
}

void Solver::enqueue(Lit l, int reason) {
    int v = var_of(l);
    assigns_[static_cast<std::size_t>(v)] = sign_of(l) ? kFalse : kTrue;
    level_[static_cast<std::size_t>(v)] = decision_level();
    reason_[static_cast<std::size_t>(v)] = reason;
    trail_.push_back(l);
}

int Solver::propagate() {
    while (qhead_ < trail_.size()) {
        Lit p = trail_[qhead_++];
        Lit false_lit = negate(p);
        auto& ws = watches_[static_cast<std::size_t>(false_lit)];
        std::size_t i = 0, j = 0;
        while (i < ws.size()) {
            int ci = ws[i++];
            auto& c = clauses_[static_cast<std::size_t>(ci)];
            if (c[0] == false_lit) std::swap(c[0], c[1]);
            if (value(c[0]) == kTrue) {
                ws[j++] = ci;
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < c.size(); ++k) {
                if (value(c[k]) != kFalse) {
                    std::swap(c[1], c[k]);
                    watches_[static_cast<std::size_t>(c[1])].push_back(ci);
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            ws[j++] = ci;
            if (value(c[0]) == kFalse) {
                while (i < ws.size()) ws[j++] = ws[i++];
                ws.resize(j);
                qhead_ = trail_.size();
                return ci;
            }
            enqueue(c[0], ci);
        }
        ws.resize(j);
    }
    return -1;
}

void Solver::bump(int v) {
    auto& a = activity_[static_cast<std::size_t>(v)];
    a += var_inc_;
    if (a > 1e100) {
        for (auto& x : activity_) x *= 1e-100;
        var_inc_ *= 1e-100;
    }
    if (heap_pos_[static_cast<std::size_t>(v)] >= 0) heap_up(static_cast<std::size_t>(heap_pos_[static_cast<std::size_t>(v)]));
}

void Solver::analyze(int confl, std::vector<Lit>& learnt, int& bt_level) {
    learnt.clear();
    learnt.push_back(0);
    int pending = 0;
    Lit p = -1;
    std::size_t idx = trail_.size();
    std::vector<int> touched;
    do {
        const auto& c = clauses_[static_cast<std::size_t>(confl)];
        for (std::size_t k = (p == -1 ? 0 : 1); k < c.size(); ++k) {
            Lit q = c[k];
            int v = var_of(q);
            if (seen_[static_cast<std::size_t>(v)] || level_[static_cast<std::size_t>(v)] == 0) continue;
            seen_[static_cast<std::size_t>(v)] = 1;
            touched.push_back(v);
            bump(v);
            if (level_[static_cast<std::size_t>(v)] >= decision_level()) ++pending;
            else learnt.push_back(q);
        }
        do {
            --idx;
        } while (!seen_[static_cast<std::size_t>(var_of(trail_[idx]))]);
        p = trail_[idx];
        confl = reason_[static_cast<std::size_t>(var_of(p))];
        seen_[static_cast<std::size_t>(var_of(p))] = 0;
        --pending;
        // Reason clauses keep the implied literal at position 0.
    } while (pending > 0);
    learnt[0] = negate(p);
    for (int v : touched) seen_[static_cast<std::size_t>(v)] = 0;

    bt_level = 0;
    if (learnt.size() > 1) {
        std::size_t max_i = 1;
        for (std::size_t k = 2; k < learnt.size(); ++k)
            if (level_[static_cast<std::size_t>(var_of(learnt[k]))] > level_[static_cast<std::size_t>(var_of(learnt[max_i]))])
                max_i = k;
        std::swap(learnt[1], learnt[max_i]);
        bt_level = level_[static_cast<std::size_t>(var_of(learnt[1]))];
    }
    var_inc_ /= 0.95;
}

void Solver::cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    for (std::size_t i = trail_.size(); i-- > static_cast<std::size_t>(trail_lim_[static_cast<std::size_t>(lvl)]);) {
        int v = var_of(trail_[i]);
        assigns_[static_cast<std::size_t>(v)] = kUndef;
        reason_[static_cast<std::size_t>(v)] = -1;
        phase_[static_cast<std::size_t>(v)] = !sign_of(trail_[i]);
        if (heap_pos_[static_cast<std::size_t>(v)] < 0) heap_insert(v);
    }
    trail_.resize(static_cast<std::size_t>(trail_lim_[static_cast<std::size_t>(lvl)]));
    trail_lim_.resize(static_cast<std::size_t>(lvl));
    qhead_ = trail_.size();
}

void Solver::heap_insert(int v) {
    heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_.size() - 1);
}

void Solver::heap_up(std::size_t i) {
    int v = heap_[i];
    double a = activity_[static_cast<std::size_t>(v)];
    while (i > 0) {
        std::size_t parent = (i - 1) / 2;
        if (activity_[static_cast<std::size_t>(heap_[parent])] >= a) break;
        heap_[i] = heap_[parent];
        heap_pos_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
        i = parent;
    }
    heap_[i] = v;
    heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(i);
}

void Solver::heap_down(std::size_t i) {
    int v = heap_[i];
    double a = activity_[static_cast<std::size_t>(v)];
    for (;;) {
        std::size_t l = 2 * i + 1, r = l + 1, best = i;
        double ba = a;
        if (l < heap_.size() && activity_[static_cast<std::size_t>(heap_[l])] > ba) {
            best = l;
            ba = activity_[static_cast<std::size_t>(heap_[l])];
        }
        if (r < heap_.size() && activity_[static_cast<std::size_t>(heap_[r])] > ba) best = r;
        if (best == i) break;
        heap_[i] = heap_[best];
        heap_pos_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
        i = best;
    }
    heap_[i] = v;
    heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(i);
}

int Solver::heap_pop() {
    int top = heap_.front();
    heap_pos_[static_cast<std::size_t>(top)] = -1;
    int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        heap_[0] = last;
        heap_pos_[static_cast<std::size_t>(last)] = 0;
        heap_down(0);
    }
    return top;
}

Lit Solver::pick_branch() {
    while (!heap_.empty()) {
        int v = heap_pop();
        if (assigns_[static_cast<std::size_t>(v)] == kUndef) return phase_[static_cast<std::size_t>(v)] ? pos(v) : neg(v);
    }
    return -1;
}

Result Solver::solve(const std::vector<Lit>& assumptions, std::optional<Clock::time_point> deadline) {
    if (!ok_) return Result::Unsat;
    cancel_until(0);
    if (propagate() >= 0) {
        ok_ = false;
        return Result::Unsat;
    }
    std::vector<Lit> learnt;
    long conflicts = 0;
    int restart_round = 0;
    long restart_limit = static_cast<long>(100 * luby(2, restart_round));
    long since_restart = 0;
    for (;;) {
        int confl = propagate();
        if (confl >= 0) {
            ++conflicts;
            ++since_restart;
            if (decision_level() == 0) {
                ok_ = false;
                return Result::Unsat;
            }
            int bt = 0;
            analyze(confl, learnt, bt);
            cancel_until(bt);
            if (learnt.size() == 1) {
                enqueue(learnt[0], -1);
            } else {
                int ci = attach(learnt);
                enqueue(learnt[0], ci);
            }
            if (deadline && (conflicts & 255) == 0 && Clock::now() > *deadline) {
                cancel_until(0);
                return Result::Unknown;
            }
            continue;
        }
        if (since_restart >= restart_limit) {
            since_restart = 0;
            restart_limit = static_cast<long>(100 * luby(2, ++restart_round));
            cancel_until(0);
            continue;
        }
        Lit next = -1;
        while (decision_level() < static_cast<int>(assumptions.size())) {
            Lit a = assumptions[static_cast<std::size_t>(decision_level())];
            auto v = value(a);
            if (v == kTrue) {
                trail_lim_.push_back(static_cast<int>(trail_.size()));
            } else if (v == kFalse) {
                cancel_until(0);
                return Result::Unsat;
            } else {
                next = a;
                break;
            }
        }
        if (next == -1) {
            next = pick_branch();
            if (next == -1) {
                model_.assign(assigns_.size(), false);
                for (std::size_t v = 0; v < assigns_.size(); ++v) model_[v] = assigns_[v] == kTrue;
                cancel_until(0);
                return Result::Sat;
            }
        }
        trail_lim_.push_back(static_cast<int>(trail_.size()));
        enqueue(next, -1);
    }
}

}  // namespace sitcalc::sat
