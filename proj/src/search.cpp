#include "gmatch/search.hpp"

#include "gmatch/nogood.hpp"
#include "gmatch/reservation.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace gmatch {

const char* to_string(Termination t) {
    switch (t) {
    case Termination::kComplete: return "complete";
    case Termination::kEmbeddingLimit: return "embedding-limit";
    case Termination::kTimeLimit: return "time-limit";
    }
    return "?";
}

MatchStats& MatchStats::operator+=(const MatchStats& o) {
    recursions += o.recursions;
    embeddings += o.embeddings;
    pruned_injectivity += o.pruned_injectivity;
    pruned_reservation += o.pruned_reservation;
    pruned_nv += o.pruned_nv;
    pruned_ne += o.pruned_ne;
    backjumps += o.backjumps;
    return *this;
}

void MatchConfig::validate() const {
    if (reservation_size > 20)
        throw std::invalid_argument("reservation size limit must be <= 20");
    if (threads < 1) throw std::invalid_argument("thread count must be >= 1");
    if ((audit.on_record || audit.on_match) && threads != 1)
        throw std::invalid_argument("nogood auditing requires a single thread");
}

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint32_t kNoPos = 0xffffffffu;

// ---------------------------------------------------------------------------
// Shared run control: embedding limit, time limit, work pool.

struct Task {
    std::vector<std::uint32_t> prefix; // candidate indices of positions 0..d-1
    std::vector<std::uint32_t> cands;  // candidate indices to try at depth d
    bool tainted = false;              // true for stolen slices
};

class WorkPool {
public:
    explicit WorkPool(unsigned workers) : workers_(workers) {}

    void push(Task t) {
        {
            std::lock_guard lk(mu_);
            queue_.push_back(std::move(t));
            ++outstanding_;
            refresh();
        }
        cv_.notify_one();
    }

    bool pop(Task& out) {
        std::unique_lock lk(mu_);
        ++idle_;
        refresh();
        cv_.wait(lk, [&] { return !queue_.empty() || outstanding_ == 0; });
        --idle_;
        if (queue_.empty()) {
            refresh();
            return false;
        }
        out = std::move(queue_.front());
        queue_.pop_front();
        refresh();
        return true;
    }

    void task_done() {
        std::lock_guard lk(mu_);
        if (--outstanding_ == 0) cv_.notify_all();
    }

    bool want_work() const { return hungry_.load(std::memory_order_relaxed); }

private:
    void refresh() {
        hungry_.store(queue_.empty() && idle_ > 0, std::memory_order_relaxed);
    }

    std::mutex mu_;
    std::condition_variable cv_;
    std::deque<Task> queue_;
    unsigned idle_ = 0;
    unsigned outstanding_ = 0;
    unsigned workers_;
    std::atomic<bool> hungry_{false};
};

struct Control {
    std::atomic<std::uint64_t> emitted{0};
    std::uint64_t limit = 0;
    std::atomic<bool> stop_limit{false};
    std::atomic<bool> stop_time{false};
    bool has_deadline = false;
    Clock::time_point deadline{};
    WorkPool* pool = nullptr;
    std::mutex sink_mu;
    EmbeddingSink* sink = nullptr;
    std::vector<std::vector<VertexId>>* collect = nullptr;

    bool stopped() const {
        return stop_limit.load(std::memory_order_relaxed) ||
               stop_time.load(std::memory_order_relaxed);
    }
};

// ---------------------------------------------------------------------------
// Engine: one backtracking worker. Owns its search state and nogood store;
// shares only the candidate space and the Control block.

enum class Status : std::uint8_t { kEmbedded, kDeadend, kUnknown };

struct FixedOutcome {
    enum Kind : std::uint8_t { kMask, kPoison, kSatisfied } kind = kPoison;
    Mask mask{};
};

// An edge-nogood target being tracked below its birth level: the slot of
// candidate edge ((u_src, v), (u_j, target)) that may receive a record once
// the subtree proves the pair joint-futile.
struct ActiveTarget {
    std::uint32_t j = 0;
    std::uint32_t tpos = 0;
    std::uint32_t edge_idx = 0;
    std::uint32_t entry = 0;
    bool satisfied = false;
    bool killed = false; // dropped from u_j's frame in the current child
    std::uint32_t kill_level = 0;
    Mask kill_mask{};
    bool born_killed = false; // already absent from u_j's frame at birth
    Mask born_kill{};
};

struct FixedAcc {
    Mask uni{};
    Mask shortcut{};
    bool has_shortcut = false;
    bool poison = false;
    bool has_capture = false;
    FixedOutcome capture{};
};

struct Level {
    const std::vector<std::uint32_t>* frame = nullptr;
    std::size_t next = 0;
    std::size_t end = 0;
    bool tainted = false;

    bool found = false;
    bool poison = false;
    Mask uni{};
    bool has_shortcut = false;
    Mask shortcut{};

    struct Undo {
        std::uint32_t qv;
        const std::vector<std::uint32_t>* old_frame;
        Mask old_bmask;
    };
    std::vector<Undo> undo;
    std::vector<std::vector<std::uint32_t>> refined; // per forward neighbor

    std::size_t n_active = 0;
    std::vector<FixedAcc> fixed_acc;
    std::vector<FixedOutcome> fixed_res;
    std::vector<std::uint32_t> killed_now;
};

class Engine {
public:
    Engine(const CandidateSpace& cs, const MatchConfig& cfg, NogoodStore& store, Control& ctl)
        : cs_(cs), cfg_(cfg), store_(store), ctl_(ctl), nq_(cs.query.vertex_count()) {
        emb_pos_.assign(nq_, kNoPos);
        emb_vtx_.assign(nq_, 0);
        assigned_at_.assign(cs.data_vertex_count, -1);
        bmask_.assign(nq_, Mask{});
        anc_.assign(nq_ + 1, 0);
        cur_.resize(nq_);
        identity_.resize(nq_);
        levels_.resize(nq_);
        for (std::uint32_t i = 0; i < nq_; ++i) {
            identity_[i].resize(cs.cand[i].size());
            for (std::uint32_t p = 0; p < cs.cand[i].size(); ++p) identity_[i][p] = p;
            cur_[i] = &identity_[i];
            levels_[i].refined.resize(cs.fwd[i].size());
            for (std::size_t f = 0; f < cs.fwd[i].size(); ++f)
                levels_[i].refined[f].reserve(cs.cand[cs.fwd[i][f]].size());
        }
        targets_by_qv_.resize(nq_);
    }

    MatchStats stats;

    void run_root() {
        backtrack(0, nullptr, false);
    }

    // Replays a stolen prefix (assignments with full refinement bookkeeping,
    // no candidate loops) and searches the given slice at depth |prefix|.
    // A replay frame can empty under this worker's own edge nogoods; the
    // task is then dead and discarded.
    void run_task(const Task& task) {
        const auto d = static_cast<std::uint32_t>(task.prefix.size());
        std::uint32_t done = 0;
        bool ok = true;
        for (std::uint32_t l = 0; l < d; ++l) {
            levels_[l].next = levels_[l].end = 0; // replay levels are not splittable
            assign(l, task.prefix[l]);
            if (refine(l, task.prefix[l]) >= 0) {
                undo_refine(l);
                unassign(l);
                ok = false;
                break;
            }
            ++done;
        }
        if (ok) backtrack(d, &task.cands, task.tainted);
        while (done-- > 0) {
            undo_refine(done);
            unassign(done);
        }
    }

private:
    const CandidateSpace& cs_;
    const MatchConfig& cfg_;
    NogoodStore& store_;
    Control& ctl_;
    const std::uint32_t nq_;

    std::vector<std::uint32_t> emb_pos_;
    std::vector<VertexId> emb_vtx_;
    std::vector<std::int32_t> assigned_at_;
    std::vector<Mask> bmask_;
    std::vector<std::uint64_t> anc_;
    std::uint64_t next_id_ = 0;
    std::uint64_t tick_ = 0;

    std::vector<const std::vector<std::uint32_t>*> cur_;
    std::vector<std::vector<std::uint32_t>> identity_;
    std::vector<Level> levels_;

    std::vector<ActiveTarget> targets_;
    std::vector<std::vector<std::uint32_t>> targets_by_qv_;

    // -- small helpers ------------------------------------------------------

    void assign(std::uint32_t k, std::uint32_t pos) {
        VertexId v = cs_.cand[k][pos];
        emb_pos_[k] = pos;
        emb_vtx_[k] = v;
        assigned_at_[v] = static_cast<std::int32_t>(k);
        anc_[k + 1] = ++next_id_;
    }

    void unassign(std::uint32_t k) {
        assigned_at_[emb_vtx_[k]] = -1;
        emb_pos_[k] = kNoPos;
    }

    void poll_time() {
        if ((++tick_ & 1023u) == 0 && ctl_.has_deadline && Clock::now() > ctl_.deadline)
            ctl_.stop_time.store(true, std::memory_order_relaxed);
    }

    NogoodAudit::Assignments decode(const Mask& dom) const {
        NogoodAudit::Assignments out;
        dom.for_each([&](unsigned p) { out.emplace_back(p, emb_vtx_[p]); });
        return out;
    }

    NogoodAudit::Assignments embedding_prefix(std::uint32_t len) const {
        NogoodAudit::Assignments out;
        for (std::uint32_t p = 0; p < len; ++p) out.emplace_back(p, emb_vtx_[p]);
        return out;
    }

    // -- forward refinement --------------------------------------------------

    // Kill bookkeeping: a tracked edge-nogood target dropped from u_f's frame
    // resolves to the assignment that dropped it.
    void kill_targets(std::uint32_t f, std::uint32_t dropped, std::uint32_t k, const Mask& mask,
                      Level& lvl) {
        for (std::uint32_t idx : targets_by_qv_[f]) {
            ActiveTarget& t = targets_[idx];
            if (t.tpos != dropped || t.satisfied || t.killed || t.born_killed) continue;
            t.killed = true;
            t.kill_level = k;
            t.kill_mask = mask;
            lvl.killed_now.push_back(idx);
        }
    }

    // Refines every forward frame of u_k under the assignment at candidate
    // index `pos`. Returns the first emptied forward vertex, or -1.
    std::int32_t refine(std::uint32_t k, std::uint32_t pos) {
        Level& lvl = levels_[k];
        lvl.undo.clear();
        for (std::size_t fi = 0; fi < cs_.fwd[k].size(); ++fi) {
            std::uint32_t f = cs_.fwd[k][fi];
            std::uint32_t eidx = cs_.edge_of_fwd[k][fi];
            const CandidateEdges& ce = cs_.edges[eidx];
            auto targets = ce.targets_of(pos);
            const std::uint32_t base = ce.offsets[pos];
            const std::vector<std::uint32_t>& old = *cur_[f];
            std::vector<std::uint32_t>& out = lvl.refined[fi];
            out.clear();

            const bool ne_on = cfg_.use_ne && ce.in_two_core && !store_.ne[eidx].empty();
            const bool track = !targets_by_qv_[f].empty();
            Mask guard_doms{};

            std::size_t b = 0;
            for (std::uint32_t a : old) {
                while (b < targets.size() && targets[b] < a) ++b;
                if (b == targets.size() || targets[b] != a) {
                    if (track) kill_targets(f, a, k, Mask::of(k), lvl); // adjacency drop
                    continue;
                }
                if (ne_on) {
                    const NogoodRecord& rec = store_.ne[eidx][base + b];
                    if (matches_record(rec, anc_, k)) {
                        ++stats.pruned_ne;
                        guard_doms |= rec.dom;
                        if (track) kill_targets(f, a, k, rec.dom | Mask::of(k), lvl);
                        if (cfg_.audit.on_match)
                            cfg_.audit.on_match({true, k, cs_.cand[k][pos], f, cs_.cand[f][a]},
                                                embedding_prefix(k + 1));
                        continue;
                    }
                }
                out.push_back(a);
            }

            lvl.undo.push_back({f, cur_[f], bmask_[f]});
            if (out.size() < old.size()) bmask_[f].set(k);
            bmask_[f] |= guard_doms;
            cur_[f] = &out;
            if (out.empty()) return static_cast<std::int32_t>(f);
        }
        return -1;
    }

    void undo_refine(std::uint32_t k) {
        Level& lvl = levels_[k];
        for (auto it = lvl.undo.rbegin(); it != lvl.undo.rend(); ++it) {
            cur_[it->qv] = it->old_frame;
            bmask_[it->qv] = it->old_bmask;
        }
        lvl.undo.clear();
    }

    // -- edge-nogood targets -------------------------------------------------

    // Resolution for a target already missing from u_j's frame at birth: the
    // earliest assignment responsible (adjacency first, then a matched edge
    // guard).
    FixedOutcome birth_kill(std::uint32_t k, std::uint32_t j, std::uint32_t tpos) {
        for (std::size_t bi = 0; bi < cs_.bwd[j].size(); ++bi) {
            std::uint32_t l = cs_.bwd[j][bi];
            if (l >= k) break;
            const CandidateEdges& ce = cs_.edges[cs_.edge_of_bwd[j][bi]];
            auto tg = ce.targets_of(emb_pos_[l]);
            if (!std::binary_search(tg.begin(), tg.end(), tpos))
                return {FixedOutcome::kMask, Mask::of(l)};
        }
        for (std::size_t bi = 0; bi < cs_.bwd[j].size(); ++bi) {
            std::uint32_t l = cs_.bwd[j][bi];
            if (l >= k) break;
            std::uint32_t eidx = cs_.edge_of_bwd[j][bi];
            const CandidateEdges& ce = cs_.edges[eidx];
            if (store_.ne[eidx].empty()) continue;
            auto tg = ce.targets_of(emb_pos_[l]);
            auto it = std::lower_bound(tg.begin(), tg.end(), tpos);
            if (it == tg.end() || *it != tpos) continue;
            std::uint32_t entry = ce.offsets[emb_pos_[l]] + static_cast<std::uint32_t>(it - tg.begin());
            const NogoodRecord& rec = store_.ne[eidx][entry];
            if (matches_record(rec, anc_, k)) return {FixedOutcome::kMask, rec.dom | Mask::of(l)};
        }
        return {FixedOutcome::kPoison, {}}; // unreachable when frames are consistent
    }

    // Pushes the trackable edge-nogood targets of assignment (u_k, pos).
    std::size_t push_born_targets(std::uint32_t k, std::uint32_t pos) {
        std::size_t begin = targets_.size();
        for (std::size_t fi = 0; fi < cs_.fwd[k].size(); ++fi) {
            std::uint32_t f = cs_.fwd[k][fi];
            std::uint32_t eidx = cs_.edge_of_fwd[k][fi];
            const CandidateEdges& ce = cs_.edges[eidx];
            if (!ce.in_two_core) continue;
            auto tg = ce.targets_of(pos);
            const std::uint32_t base = ce.offsets[pos];
            const std::vector<std::uint32_t>& frame = *cur_[f]; // pre-refinement
            for (std::size_t b = 0; b < tg.size(); ++b) {
                ActiveTarget t;
                t.j = f;
                t.tpos = tg[b];
                t.edge_idx = eidx;
                t.entry = base + static_cast<std::uint32_t>(b);
                if (!std::binary_search(frame.begin(), frame.end(), t.tpos)) {
                    FixedOutcome out = birth_kill(k, f, t.tpos);
                    t.born_killed = true;
                    t.born_kill = out.kind == FixedOutcome::kMask ? out.mask : Mask{};
                    if (out.kind != FixedOutcome::kMask) t.satisfied = true; // skip write
                }
                targets_by_qv_[f].push_back(static_cast<std::uint32_t>(targets_.size()));
                targets_.push_back(std::move(t));
            }
        }
        return begin;
    }

    void pop_born_targets(std::size_t begin) {
        while (targets_.size() > begin) {
            targets_by_qv_[targets_.back().j].pop_back();
            targets_.pop_back();
        }
    }

    void write_ne(std::uint32_t k, std::uint32_t pos, std::size_t born_begin) {
        if (ctl_.stopped()) return;
        for (std::size_t idx = born_begin; idx < targets_.size(); ++idx) {
            ActiveTarget& t = targets_[idx];
            if (t.satisfied) continue;
            FixedOutcome out;
            if (t.born_killed)
                out = {FixedOutcome::kMask, t.born_kill};
            else if (t.killed && t.kill_level == k)
                out = {FixedOutcome::kMask, t.kill_mask};
            else
                out = levels_[k + 1].fixed_res[idx];
            if (out.kind != FixedOutcome::kMask) continue;
            Mask dom = out.mask.below(k);
            NogoodRecord rec = encode_nogood(dom, anc_);
            store_.ne[t.edge_idx][t.entry] = rec;
            if (cfg_.audit.on_record)
                cfg_.audit.on_record({true, k, cs_.cand[k][pos], t.j, cs_.cand[t.j][t.tpos]},
                                     decode(dom));
        }
    }

    // -- nogood discovery ----------------------------------------------------

    void record_nv(std::uint32_t k, std::uint32_t pos, const Mask& deadend_mask) {
        if (!cfg_.use_nv || ctl_.stopped() || deadend_mask.empty()) return;
        int last = deadend_mask.max_pos();
        Mask dom = deadend_mask.without(static_cast<unsigned>(last));
        NogoodRecord rec = encode_nogood(dom, anc_);
        std::uint32_t slot = last == static_cast<int>(k) ? pos : emb_pos_[last];
        store_.nv[last][slot] = rec;
        if (cfg_.audit.on_record)
            cfg_.audit.on_record({false, static_cast<std::uint32_t>(last), cs_.cand[last][slot],
                                  0, 0},
                                 decode(dom));
    }

    // Folds one child outcome into the fixed accumulators of the targets that
    // are still being tracked at this level.
    void fold_fixed(std::uint32_t k, std::uint32_t pos, bool via_conflict, const Mask& child_mask,
                    Status st) {
        Level& lvl = levels_[k];
        for (std::size_t idx = 0; idx < lvl.n_active; ++idx) {
            ActiveTarget& t = targets_[idx];
            if (t.satisfied || t.born_killed || t.j < k) continue;

            bool have_contrib = false;
            FixedOutcome contrib;
            if (t.killed) {
                if (t.kill_level != k) continue; // dropped in an ancestor's child
                contrib = {FixedOutcome::kMask, t.kill_mask};
                t.killed = false;
                have_contrib = true;
            }

            FixedAcc& acc = lvl.fixed_acc[idx];
            if (t.j == k) {
                // The target's own position: every sibling shares the one
                // resolution derived from the target vertex's extension.
                if (t.tpos == pos && !acc.has_capture) {
                    acc.has_capture = true;
                    if (st == Status::kEmbedded && !via_conflict)
                        acc.capture = {FixedOutcome::kSatisfied, {}};
                    else if (via_conflict || st == Status::kDeadend)
                        acc.capture = {FixedOutcome::kMask, child_mask.without(k)};
                    else
                        acc.capture = {FixedOutcome::kPoison, {}};
                }
                continue;
            }

            if (!have_contrib) {
                if (via_conflict)
                    contrib = {FixedOutcome::kMask, child_mask};
                else if (st == Status::kUnknown)
                    contrib = {FixedOutcome::kPoison, {}};
                else
                    contrib = levels_[k + 1].fixed_res[idx];
            }
            if (contrib.kind == FixedOutcome::kPoison) {
                acc.poison = true;
            } else if (contrib.kind == FixedOutcome::kMask) {
                if (!acc.has_shortcut && !contrib.mask.test(k)) {
                    acc.has_shortcut = true;
                    acc.shortcut = contrib.mask;
                } else {
                    acc.uni |= contrib.mask;
                }
            }
        }
    }

    void finalize_fixed(std::uint32_t k, bool truncated) {
        Level& lvl = levels_[k];
        lvl.fixed_res.assign(lvl.n_active, FixedOutcome{});
        for (std::size_t idx = 0; idx < lvl.n_active; ++idx) {
            ActiveTarget& t = targets_[idx];
            FixedOutcome& res = lvl.fixed_res[idx];
            if (t.satisfied) {
                res = {FixedOutcome::kSatisfied, {}};
            } else if (t.killed || t.born_killed || t.j < k) {
                res = {FixedOutcome::kPoison, {}}; // resolved elsewhere; never read
            } else if (t.j == k) {
                res = lvl.fixed_acc[idx].has_capture ? lvl.fixed_acc[idx].capture
                                                     : FixedOutcome{FixedOutcome::kPoison, {}};
            } else if (lvl.fixed_acc[idx].has_shortcut) {
                res = {FixedOutcome::kMask, lvl.fixed_acc[idx].shortcut};
            } else if (lvl.fixed_acc[idx].poison || truncated) {
                res = {FixedOutcome::kPoison, {}};
            } else {
                res = {FixedOutcome::kMask, (lvl.fixed_acc[idx].uni | bmask_[k]).without(k)};
            }
        }
    }

    // -- emission ------------------------------------------------------------

    void emit() {
        for (ActiveTarget& t : targets_)
            if (!t.satisfied && emb_vtx_[t.j] == cs_.cand[t.j][t.tpos]) t.satisfied = true;

        std::uint64_t old = ctl_.emitted.fetch_add(1, std::memory_order_relaxed);
        if (ctl_.limit) {
            if (old >= ctl_.limit) {
                ctl_.emitted.fetch_sub(1, std::memory_order_relaxed);
                ctl_.stop_limit.store(true, std::memory_order_relaxed);
                return;
            }
            if (old + 1 == ctl_.limit) ctl_.stop_limit.store(true, std::memory_order_relaxed);
        }
        ++stats.embeddings;
        if (ctl_.sink || ctl_.collect) {
            std::lock_guard lk(ctl_.sink_mu);
            if (ctl_.sink) ctl_.sink->accept(emb_vtx_);
            if (ctl_.collect) ctl_.collect->push_back(emb_vtx_);
        }
    }

    // -- work sharing ---------------------------------------------------------

    void maybe_split(std::uint32_t k) {
        if (!ctl_.pool || !ctl_.pool->want_work()) return;
        for (std::uint32_t d = 0; d <= k && d < nq_ / 2; ++d) {
            Level& lvl = levels_[d];
            std::size_t remaining = lvl.end - lvl.next;
            if (remaining < 4) continue;
            std::size_t take = remaining / 2;
            Task task;
            task.tainted = true;
            task.prefix.assign(emb_pos_.begin(), emb_pos_.begin() + d);
            task.cands.assign(lvl.frame->begin() + (lvl.end - take), lvl.frame->begin() + lvl.end);
            lvl.end -= take;
            lvl.tainted = true;
            ctl_.pool->push(std::move(task));
            return;
        }
    }

    // -- the backtracking loop -------------------------------------------------

    struct Result {
        Status st;
        Mask mask{};
    };

    Result backtrack(std::uint32_t k, const std::vector<std::uint32_t>* frame_override,
                     bool taint_init) {
        ++stats.recursions;
        poll_time();
        if (ctl_.stopped()) return {Status::kUnknown};
        if (k == nq_) {
            emit();
            return {Status::kEmbedded};
        }

        Level& lvl = levels_[k];
        lvl.frame = frame_override ? frame_override : cur_[k];
        lvl.next = 0;
        lvl.end = lvl.frame->size();
        lvl.tainted = taint_init;
        lvl.found = false;
        lvl.poison = false;
        lvl.uni = Mask{};
        lvl.has_shortcut = false;
        lvl.n_active = targets_.size();
        lvl.fixed_acc.assign(lvl.n_active, FixedAcc{});

        while (lvl.next < lvl.end) {
            maybe_split(k);
            if (ctl_.stopped()) {
                lvl.tainted = true;
                break;
            }
            const std::uint32_t pos = (*lvl.frame)[lvl.next++];
            const VertexId v = cs_.cand[k][pos];

            // Vertex-level filters: injectivity, reservation guard, vertex
            // nogood guard. Each yields a conflict mask.
            bool via_conflict = false;
            Mask conflict{};
            if (std::int32_t at = assigned_at_[v]; at >= 0) {
                ++stats.pruned_injectivity;
                via_conflict = true;
                conflict = Mask::of(static_cast<unsigned>(at)) | Mask::of(k);
            } else if (const ReservationGuard& rg = cs_.reservation[k][pos];
                       !rg.trivial && matches_reservation(rg, assigned_at_)) {
                ++stats.pruned_reservation;
                via_conflict = true;
                for (VertexId w : rg.vertices)
                    conflict.set(static_cast<unsigned>(assigned_at_[w]));
                conflict.set(k);
            } else if (cfg_.use_nv && matches_record(store_.nv[k][pos], anc_, k)) {
                ++stats.pruned_nv;
                if (cfg_.audit.on_match)
                    cfg_.audit.on_match({false, k, v, 0, 0}, embedding_prefix(k));
                via_conflict = true;
                conflict = store_.nv[k][pos].dom | Mask::of(k);
            }

            Result child{Status::kDeadend};
            std::size_t born_begin = targets_.size();
            bool recursed = false;

            if (!via_conflict) {
                lvl.killed_now.clear();
                assign(k, pos);
                if (cfg_.use_ne) born_begin = push_born_targets(k, pos);
                std::int32_t emptied = refine(k, pos);
                if (emptied >= 0) {
                    via_conflict = true;
                    conflict = bmask_[emptied]; // no-candidate conflict
                    for (std::uint32_t idx : lvl.killed_now) targets_[idx].killed = false;
                    lvl.killed_now.clear();
                    pop_born_targets(born_begin);
                    undo_refine(k);
                    unassign(k);
                } else {
                    child = backtrack(k + 1, nullptr, false);
                    recursed = true;
                    if (cfg_.use_ne) write_ne(k, pos, born_begin);
                    pop_born_targets(born_begin);
                    undo_refine(k);
                    unassign(k);
                }
            }

            if (via_conflict) child = {Status::kDeadend, conflict};

            fold_fixed(k, pos, via_conflict, child.mask, child.st);

            if (child.st == Status::kEmbedded) {
                lvl.found = true;
            } else if (child.st == Status::kUnknown) {
                lvl.poison = true;
            } else {
                record_nv(k, pos, child.mask);
                if (!child.mask.test(k) && !lvl.found) {
                    // Discovered nogood lies entirely inside the current
                    // partial embedding: remaining siblings are futile.
                    if (cfg_.use_backjump) {
                        ++stats.backjumps;
                        finalize_fixed(k, true);
                        return {Status::kDeadend, child.mask};
                    }
                    if (!lvl.has_shortcut) {
                        lvl.has_shortcut = true;
                        lvl.shortcut = child.mask;
                    }
                } else {
                    lvl.uni |= child.mask;
                }
            }
        }

        bool truncated = lvl.tainted;
        finalize_fixed(k, truncated);
        if (lvl.found) return {Status::kEmbedded};
        if (truncated || lvl.poison) return {Status::kUnknown};
        if (lvl.has_shortcut) return {Status::kDeadend, lvl.shortcut};
        return {Status::kDeadend, (lvl.uni | bmask_[k]).without(k)};
    }
};

Termination resolve_termination(const Control& ctl) {
    if (ctl.stop_limit.load()) return Termination::kEmbeddingLimit;
    if (ctl.stop_time.load()) return Termination::kTimeLimit;
    return Termination::kComplete;
}

void init_control(Control& ctl, const MatchConfig& cfg) {
    ctl.limit = cfg.embedding_limit;
    if (cfg.time_limit_sec > 0) {
        ctl.has_deadline = true;
        ctl.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                          std::chrono::duration<double>(cfg.time_limit_sec));
    }
}

} // namespace

SpaceSearchResult search_space(const CandidateSpace& cs, const MatchConfig& cfg,
                               NogoodStore* store, EmbeddingSink* sink) {
    cfg.validate();
    SpaceSearchResult res;
    if (cs.query.vertex_count() == 0) return res;
    for (const auto& s : cs.cand)
        if (s.empty()) return res;

    Control ctl;
    init_control(ctl, cfg);
    ctl.sink = sink;
    std::vector<std::vector<VertexId>> collected;
    if (cfg.collect_embeddings) ctl.collect = &collected;

    std::optional<NogoodStore> own;
    if (!store) {
        own.emplace(cs);
        store = &*own;
    }

    if (cfg.threads <= 1) {
        Engine eng(cs, cfg, *store, ctl);
        eng.run_root();
        res.stats = eng.stats;
    } else {
        WorkPool pool(cfg.threads);
        ctl.pool = &pool;
        {
            Task root;
            root.cands.resize(cs.cand[0].size());
            for (std::uint32_t p = 0; p < cs.cand[0].size(); ++p) root.cands[p] = p;
            pool.push(std::move(root));
        }
        std::vector<NogoodStore> stores;
        stores.reserve(cfg.threads);
        for (std::uint32_t t = 0; t < cfg.threads; ++t) stores.emplace_back(cs);
        std::vector<MatchStats> worker_stats(cfg.threads);
        std::vector<std::thread> workers;
        for (std::uint32_t t = 0; t < cfg.threads; ++t) {
            workers.emplace_back([&, t] {
                Engine eng(cs, cfg, stores[t], ctl);
                Task task;
                while (pool.pop(task)) {
                    if (!ctl.stopped()) eng.run_task(task);
                    pool.task_done();
                }
                worker_stats[t] = eng.stats;
            });
        }
        for (auto& w : workers) w.join();
        for (const auto& s : worker_stats) res.stats += s;
    }

    res.termination = resolve_termination(ctl);
    res.embedding_count = ctl.emitted.load();
    res.embeddings = std::move(collected);
    return res;
}

BuiltSpace build_space_pipeline(const Graph& query, const Graph& data, const MatchConfig& cfg) {
    cfg.validate();
    if (query.vertex_count() > Mask::kBits)
        throw std::invalid_argument("query exceeds the mask width (" +
                                    std::to_string(Mask::kBits) + " vertices)");
    BuiltSpace out;

    auto t0 = Clock::now();
    CandidateSets c = ldf_filter(query, data);
    c = nlf_filter(query, data, c);
    c = dp_refine(query, data, c, cfg.dp_sweeps);
    auto t1 = Clock::now();
    MatchingOrder order = build_matching_order(query, c);
    out.space = build_candidate_space(query, data, c, order);
    auto t2 = Clock::now();
    generate_reservation_guards(out.space, cfg.reservation_size);
    auto t3 = Clock::now();

    out.empty_candidates = c.any_empty();
    out.filter_sec = std::chrono::duration<double>(t1 - t0).count();
    out.build_sec = std::chrono::duration<double>(t2 - t1).count();
    out.reservation_sec = std::chrono::duration<double>(t3 - t2).count();
    return out;
}

MatchResult match_query(const Graph& query, const Graph& data, const MatchConfig& cfg,
                        EmbeddingSink* sink) {
    BuiltSpace built = build_space_pipeline(query, data, cfg);
    MatchResult res;
    res.order = built.space.order;
    res.filter_sec = built.filter_sec;
    res.build_sec = built.build_sec;
    res.reservation_sec = built.reservation_sec;

    auto t0 = Clock::now();
    SpaceSearchResult sr = search_space(built.space, cfg, nullptr, sink);
    res.search_sec = std::chrono::duration<double>(Clock::now() - t0).count();

    res.stats = sr.stats;
    res.termination = sr.termination;
    res.embedding_count = sr.embedding_count;
    if (cfg.collect_embeddings) {
        res.embeddings.reserve(sr.embeddings.size());
        const auto& order = built.space.order.order;
        for (const auto& row : sr.embeddings) {
            std::vector<VertexId> orig(row.size());
            for (std::size_t i = 0; i < row.size(); ++i) orig[order[i]] = row[i];
            res.embeddings.push_back(std::move(orig));
        }
    }
    return res;
}

} // namespace gmatch
