// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include "fav/checker.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <memory>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "vm/bytecode.hpp"
#include "vm/product_set.hpp"

namespace fav {

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Safe: return "SAFE";
    case VerdictKind::Violation: return "VIOLATION";
    case VerdictKind::BoundExceeded: return "BOUND_EXCEEDED";
    case VerdictKind::RuntimeFault: return "RUNTIME_FAULT";
  }
  return "?";
}

namespace {

using vm::Compiled;
using vm::Instr;
using vm::Opc;
using vm::ProductSet;
using vm::Value;
using vm::VKind;

struct Frame {
  std::int32_t func;
  std::int32_t pc;
  std::int32_t base;        // first local slot
  std::int32_t stack_base;  // operand stack height at entry
};

struct Cell {
  std::int32_t record;
  std::vector<Value> fields;
};

struct Machine {
  std::vector<Frame> frames;
  std::vector<Value> locals;
  std::vector<Value> stack;
  std::vector<Value> globals;
  std::vector<Cell> heap;
};

enum class Event { Join, Choice, Fail, Bound, Fault };

struct RunResult {
  Event event;
  std::string detail;  // label, bound kind, or fault
};

struct RunCtx {
  const Compiled& code;
  const CheckOptions& opts;
  std::uint64_t steps = 0;
  std::vector<PathStep>* trace = nullptr;
};

Machine initial_machine(const Compiled& c) {
  Machine m;
  m.globals = c.globals;
  const auto& f = c.functions[static_cast<std::size_t>(c.entry)];
  m.frames.push_back({c.entry, 0, 0, 0});
  m.locals.assign(static_cast<std::size_t>(f.locals), Value{});
  return m;
}

/// Renumbers reachable cells breadth-first from the roots and drops the rest.
void canonicalize(Machine& m) {
  std::vector<std::int32_t> map(m.heap.size(), -1);
  std::vector<Cell> out;
  out.reserve(m.heap.size());
  auto visit = [&](Value& v) {
    if (v.kind != VKind::Ref) return;
    auto& slot = map[static_cast<std::size_t>(v.v)];
    if (slot < 0) {
      slot = static_cast<std::int32_t>(out.size());
      out.push_back(m.heap[static_cast<std::size_t>(v.v)]);
    }
    v.v = slot;
  };
  for (auto& v : m.globals) visit(v);
  for (auto& v : m.locals) visit(v);
  for (auto& v : m.stack) visit(v);
  for (std::size_t i = 0; i < out.size(); ++i)
    for (auto& v : out[i].fields) visit(v);
  m.heap = std::move(out);
}

void put(std::string& k, const void* p, std::size_t n) { k.append(static_cast<const char*>(p), n); }
void put_value(std::string& k, const Value& v) {
  k.push_back(static_cast<char>(v.kind));
  put(k, &v.v, sizeof v.v);
}

/// Key of a canonicalized machine.
std::string state_key(const Machine& m) {
  std::string k;
  k.reserve(64 + 9 * (m.locals.size() + m.stack.size() + m.globals.size()));
  std::uint32_t n = static_cast<std::uint32_t>(m.frames.size());
  put(k, &n, sizeof n);
  for (const auto& f : m.frames) {
    put(k, &f.func, sizeof f.func);
    put(k, &f.pc, sizeof f.pc);
    put(k, &f.stack_base, sizeof f.stack_base);
  }
  n = static_cast<std::uint32_t>(m.stack.size());
  put(k, &n, sizeof n);
  for (const auto& v : m.locals) put_value(k, v);
  for (const auto& v : m.stack) put_value(k, v);
  for (const auto& v : m.globals) put_value(k, v);
  for (const auto& c : m.heap) {
    put(k, &c.record, sizeof c.record);
    for (const auto& v : c.fields) put_value(k, v);
  }
  return k;
}

std::int64_t wrap(std::uint64_t v) { return static_cast<std::int64_t>(v); }

/// Executes until the state reaches the join point (frame depth `depth`
/// at instruction `join_pc`, or any shallower depth) or an event occurs.
/// On Choice the pc still points at the choice instruction.
RunResult run(Machine& m, RunCtx& ctx, std::size_t depth, std::int32_t join_pc) {
  const Compiled& c = ctx.code;
  for (;;) {
    if (m.frames.size() < depth || (m.frames.size() == depth && m.frames.back().pc == join_pc))
      return {Event::Join, {}};
    Frame& fr = m.frames.back();
    const auto& fn = c.functions[static_cast<std::size_t>(fr.func)];
    const Instr& in = fn.code[static_cast<std::size_t>(fr.pc)];
    auto local = [&](std::int32_t slot) -> Value& { return m.locals[static_cast<std::size_t>(fr.base + slot)]; };
    auto pop = [&] {
      Value v = m.stack.back();
      m.stack.pop_back();
      return v;
    };
    switch (in.op) {
      case Opc::Const: m.stack.push_back(in.k); break;
      case Opc::LoadL: m.stack.push_back(local(in.a)); break;
      case Opc::StoreL: local(in.a) = pop(); break;
      case Opc::LoadG: m.stack.push_back(m.globals[static_cast<std::size_t>(in.a)]); break;
      case Opc::StoreG: m.globals[static_cast<std::size_t>(in.a)] = pop(); break;
      case Opc::FeatExpr:
      case Opc::Nondet: return {Event::Choice, {}};
      case Opc::GetF: {
        Value r = pop();
        if (r.kind != VKind::Ref) return {Event::Fault, "null dereference"};
        m.stack.push_back(m.heap[static_cast<std::size_t>(r.v)].fields[static_cast<std::size_t>(in.a)]);
        break;
      }
      case Opc::SetF: {
        Value v = pop();
        Value r = pop();
        if (r.kind != VKind::Ref) return {Event::Fault, "null dereference"};
        m.heap[static_cast<std::size_t>(r.v)].fields[static_cast<std::size_t>(in.a)] = v;
        break;
      }
      case Opc::New: {
        if (m.heap.size() >= static_cast<std::size_t>(ctx.opts.heap_cells)) {
          canonicalize(m);
          if (m.heap.size() >= static_cast<std::size_t>(ctx.opts.heap_cells)) return {Event::Bound, "heap"};
        }
        m.heap.push_back({in.a, c.records[static_cast<std::size_t>(in.a)].defaults});
        m.stack.push_back({VKind::Ref, static_cast<std::int64_t>(m.heap.size() - 1)});
        break;
      }
      case Opc::Call: {
        if (m.frames.size() >= static_cast<std::size_t>(ctx.opts.call_depth)) return {Event::Bound, "call depth"};
        const auto& callee = c.functions[static_cast<std::size_t>(in.a)];
        Frame nf{in.a, 0, static_cast<std::int32_t>(m.locals.size()),
                 static_cast<std::int32_t>(m.stack.size()) - in.b};
        m.locals.resize(m.locals.size() + static_cast<std::size_t>(callee.locals));
        for (std::int32_t i = 0; i < in.b; ++i)
          m.locals[static_cast<std::size_t>(nf.base + i)] = m.stack[static_cast<std::size_t>(nf.stack_base + i)];
        m.stack.resize(static_cast<std::size_t>(nf.stack_base));
        ++fr.pc;
        m.frames.push_back(nf);
        continue;
      }
      case Opc::Ret:
      case Opc::RetVoid: {
        Value v;
        if (in.op == Opc::Ret) v = pop();
        Frame done = fr;
        m.frames.pop_back();
        m.locals.resize(static_cast<std::size_t>(done.base));
        m.stack.resize(static_cast<std::size_t>(done.stack_base));
        if (in.op == Opc::Ret) m.stack.push_back(v);
        continue;
      }
      case Opc::MissingRet: return {Event::Fault, "missing return in '" + fn.name + "'"};
      case Opc::Jump: fr.pc = in.a; continue;
      case Opc::JumpF: {
        bool taken = pop().v != 0;
        if (in.b >= 0) {
          ++ctx.steps;
          if (ctx.trace) {
            const auto& si = c.stmts[static_cast<std::size_t>(in.b)];
            ctx.trace->push_back({si.loc, si.function, si.text, si.feature,
                                  taken ? "[" + si.condition + "]" : "[!(" + si.condition + ")]"});
          }
        }
        if (!taken) {
          fr.pc = in.a;
          continue;
        }
        break;
      }
      case Opc::Un: {
        Value v = pop();
        if (in.op2 == Op::Neg)
          m.stack.push_back({VKind::Int, wrap(0 - static_cast<std::uint64_t>(v.v))});
        else
          m.stack.push_back({VKind::Bool, v.v ? 0 : 1});
        break;
      }
      case Opc::Bin: {
        Value r = pop();
        Value l = pop();
        auto u = [](std::int64_t x) { return static_cast<std::uint64_t>(x); };
        Value res{VKind::Int, 0};
        switch (in.op2) {
          case Op::Add: res.v = wrap(u(l.v) + u(r.v)); break;
          case Op::Sub: res.v = wrap(u(l.v) - u(r.v)); break;
          case Op::Mul: res.v = wrap(u(l.v) * u(r.v)); break;
          case Op::Div:
          case Op::Mod:
            if (r.v == 0) return {Event::Fault, "division by zero"};
            if (r.v == -1)
              res.v = in.op2 == Op::Div ? wrap(0 - u(l.v)) : 0;
            else
              res.v = in.op2 == Op::Div ? l.v / r.v : l.v % r.v;
            break;
          case Op::Lt: res = {VKind::Bool, l.v < r.v}; break;
          case Op::Le: res = {VKind::Bool, l.v <= r.v}; break;
          case Op::Gt: res = {VKind::Bool, l.v > r.v}; break;
          case Op::Ge: res = {VKind::Bool, l.v >= r.v}; break;
          case Op::Eq: res = {VKind::Bool, l == r}; break;
          case Op::Ne: res = {VKind::Bool, !(l == r)}; break;
          default: return {Event::Fault, "bad operator"};
        }
        m.stack.push_back(res);
        break;
      }
      case Opc::Fail: return {Event::Fail, c.labels[static_cast<std::size_t>(in.a)]};
      case Opc::Step: {
        ++ctx.steps;
        if (ctx.trace) {
          const auto& si = c.stmts[static_cast<std::size_t>(in.a)];
          ctx.trace->push_back({si.loc, si.function, si.text, si.feature, {}});
        }
        break;
      }
      case Opc::Pop: m.stack.pop_back(); break;
      case Opc::LoopInit: local(in.a) = {VKind::Int, 0}; break;
      case Opc::LoopTick: {
        Value& cnt = local(in.a);
        ++cnt.v;
        if (cnt.v > in.c) return {Event::Bound, in.d ? "loop unroll" : "loop bound"};
        break;
      }
    }
    ++m.frames.back().pc;
  }
}

// ---- exploration ----

struct HistNode {
  std::shared_ptr<const HistNode> parent;
  std::int64_t value;
};

struct HistEntry {
  ProductSet part;
  std::shared_ptr<const HistNode> node;
};

struct SState {
  Machine m;
  ProductSet pc;
  std::vector<HistEntry> hist;  // disjoint parts covering pc
};

void restrict(SState& s, const ProductSet& to) {
  s.pc = s.pc & to;
  std::vector<HistEntry> kept;
  for (auto& h : s.hist) {
    ProductSet part = h.part & to;
    if (!part.empty()) kept.push_back({std::move(part), h.node});
  }
  s.hist = std::move(kept);
}

struct Finding {
  Event event;
  std::string detail;
  std::uint32_t selection = 0;
  std::vector<std::int64_t> choices;
};

class Explorer {
 public:
  Explorer(const Compiled& c, const CheckOptions& o) : ctx_{c, o} {}

  std::optional<Finding> finding;
  std::string bound_hit;
  std::uint64_t choice_expansions = 0;
  std::uint64_t choice_visits = 0;
  std::uint64_t peak = 1;
  std::uint64_t steps() const { return ctx_.steps; }
  std::size_t unique() const { return visited_.size(); }

  void explore() {
    const Compiled& c = ctx_.code;
    int k = static_cast<int>(c.feature_variables.size());
    ProductSet init(k, true);
    if (ctx_.opts.required_features) {
      for (std::uint32_t a = 0; a < init.universe(); ++a)
        if ((a & ctx_.opts.required_features) != ctx_.opts.required_features) init.reset(a);
    }
    if (init.empty()) return;
    SState s{initial_machine(c), init, {{init, nullptr}}};
    std::vector<SState> work;
    work.push_back(std::move(s));
    region(std::move(work), 1, -1, nullptr);
  }

 private:
  void grow(std::int64_t delta) {
    live_ = static_cast<std::uint64_t>(static_cast<std::int64_t>(live_) + delta);
    peak = std::max(peak, live_);
  }

  void record(const SState& s, Event ev, std::string detail) {
    Finding f{ev, std::move(detail), *s.pc.preferred(), {}};
    for (const auto& h : s.hist) {
      if (!h.part.test(f.selection)) continue;
      for (const HistNode* n = h.node.get(); n; n = n->parent.get()) f.choices.push_back(n->value);
      std::reverse(f.choices.begin(), f.choices.end());
      break;
    }
    finding = std::move(f);
  }

  /// Runs `work` (first element first) until every state reaches the join.
  /// Returns false once a failure or fault has been recorded.
  bool region(std::vector<SState> work, std::size_t depth, std::int32_t join_pc, std::vector<SState>* arrived) {
    std::reverse(work.begin(), work.end());
    while (!work.empty()) {
      SState s = std::move(work.back());
      work.pop_back();
      grow(-1);
      RunResult r = run(s.m, ctx_, depth, join_pc);
      switch (r.event) {
        case Event::Join:
          if (arrived) {
            arrived->push_back(std::move(s));
            grow(1);
          }
          break;
        case Event::Fail:
        case Event::Fault:
          record(s, r.event, std::move(r.detail));
          return false;
        case Event::Bound:
          if (bound_hit.empty()) bound_hit = r.detail;
          break;
        case Event::Choice: {
          canonicalize(s.m);
          if (ctx_.opts.dedup) {
            ProductSet& seen = visited_.try_emplace(state_key(s.m), s.pc.variables(), false).first->second;
            ProductSet fresh = s.pc.minus(seen);
            if (fresh.empty()) break;
            seen |= s.pc;
            if (!(fresh == s.pc)) restrict(s, fresh);
          }
          ++choice_visits;
          std::vector<SState> children = expand(s);
          choice_expansions += children.size();
          grow(static_cast<std::int64_t>(children.size()));
          const Frame& fr = s.m.frames.back();
          const Instr& in = ctx_.code.functions[static_cast<std::size_t>(fr.func)].code[static_cast<std::size_t>(fr.pc)];
          std::int32_t cj = static_cast<std::int32_t>(in.op == Opc::FeatExpr ? in.c : in.b);
          std::vector<SState> joined;
          if (!region(std::move(children), s.m.frames.size(), cj, &joined)) return false;
          std::vector<SState> merged = merge(std::move(joined));
          grow(static_cast<std::int64_t>(merged.size()));
          for (auto it = merged.rbegin(); it != merged.rend(); ++it) work.push_back(std::move(*it));
          break;
        }
      }
    }
    return true;
  }

  std::vector<SState> expand(const SState& s) {
    const Frame& fr = s.m.frames.back();
    const Instr& in = ctx_.code.functions[static_cast<std::size_t>(fr.func)].code[static_cast<std::size_t>(fr.pc)];
    std::vector<SState> out;
    if (in.op == Opc::FeatExpr) {
      const ProductSet& truth = ctx_.code.feature_exprs[static_cast<std::size_t>(in.a)];
      for (bool value : {true, false}) {
        ProductSet part = value ? s.pc & truth : s.pc.minus(truth);
        if (part.empty()) continue;
        SState child = s;
        restrict(child, part);
        child.m.stack.push_back({VKind::Bool, value});
        ++child.m.frames.back().pc;
        out.push_back(std::move(child));
      }
    } else {
      for (std::int64_t v = in.c; v <= in.d; ++v) {
        SState child = s;
        for (auto& h : child.hist) h.node = std::make_shared<const HistNode>(HistNode{h.node, v});
        child.m.stack.push_back({VKind::Int, v});
        ++child.m.frames.back().pc;
        out.push_back(std::move(child));
      }
    }
    return out;
  }

  /// Merges identical states, uniting their presence conditions.
  std::vector<SState> merge(std::vector<SState> joined) {
    grow(-static_cast<std::int64_t>(joined.size()));
    std::vector<SState> out;
    std::unordered_map<std::string, std::size_t> index;
    for (auto& s : joined) {
      canonicalize(s.m);
      auto [it, fresh] = index.try_emplace(state_key(s.m), out.size());
      if (fresh) {
        out.push_back(std::move(s));
        continue;
      }
      SState& into = out[it->second];
      ProductSet add = s.pc.minus(into.pc);
      if (add.empty()) continue;
      restrict(s, add);
      into.pc |= s.pc;
      for (auto& h : s.hist) into.hist.push_back(std::move(h));
    }
    return out;
  }

  RunCtx ctx_;
  std::unordered_map<std::string, ProductSet> visited_;
  std::uint64_t live_ = 1;
};

struct ReplayOutcome {
  RunResult result;
  std::vector<PathStep> steps;
};

ReplayOutcome run_fixed(const Compiled& c, const CheckOptions& opts, std::uint32_t selection,
                        const std::vector<std::int64_t>& choices) {
  RunCtx ctx{c, opts};
  ReplayOutcome out;
  ctx.trace = &out.steps;
  Machine m = initial_machine(c);
  std::size_t next = 0;
  for (;;) {
    RunResult r = run(m, ctx, 1, -1);
    if (r.event != Event::Choice) {
      if (next != choices.size()) throw ReplayDivergence("path has unused nondet choices");
      out.result = std::move(r);
      return out;
    }
    const Frame& fr = m.frames.back();
    const Instr& in = c.functions[static_cast<std::size_t>(fr.func)].code[static_cast<std::size_t>(fr.pc)];
    if (in.op == Opc::FeatExpr) {
      m.stack.push_back({VKind::Bool, c.feature_exprs[static_cast<std::size_t>(in.a)].test(selection)});
    } else {
      if (next >= choices.size()) throw ReplayDivergence("path runs out of nondet choices");
      std::int64_t v = choices[next++];
      if (v < in.c || v > in.d) throw ReplayDivergence("nondet choice out of range");
      m.stack.push_back({VKind::Int, v});
    }
    ++m.frames.back().pc;
  }
}

std::vector<std::string> selection_names(const Compiled& c, std::uint32_t mask) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < c.feature_variables.size(); ++i)
    if ((mask >> i) & 1u) out.push_back(c.feature_variables[i]);
  return out;
}

std::string automaton_of(const std::string& label) {
  auto at = label.find('@');
  return at == std::string::npos ? std::string() : label.substr(0, at);
}

}  // namespace

CheckResult check(const Program& program, const CheckOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  Compiled c = vm::compile(program, opts.unroll_bound);
  Explorer ex(c, opts);
  ex.explore();

  CheckResult res;
  if (ex.finding) {
    const Finding& f = *ex.finding;
    Verdict& v = res.verdict;
    v.kind = f.event == Event::Fail ? VerdictKind::Violation : VerdictKind::RuntimeFault;
    v.path.selection_mask = f.selection;
    v.path.selection = selection_names(c, f.selection);
    v.path.choices = f.choices;
    ReplayOutcome ro = run_fixed(c, opts, f.selection, f.choices);
    if (ro.result.event != f.event || ro.result.detail != f.detail)
      throw std::logic_error("counterexample does not reproduce: " + ro.result.detail);
    v.path.steps = std::move(ro.steps);
    if (v.kind == VerdictKind::Violation) {
      v.label = f.detail;
      v.automaton = automaton_of(f.detail);
    } else {
      v.detail = f.detail;
    }
  } else if (!ex.bound_hit.empty()) {
    res.verdict.kind = VerdictKind::BoundExceeded;
    res.verdict.detail = ex.bound_hit;
  }
  res.metrics.states_explored = ex.steps() + ex.choice_expansions;
  res.metrics.unique_states = opts.dedup ? ex.unique() : ex.choice_visits;
  res.metrics.peak_frontier = ex.peak;
  res.metrics.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

Verdict replay(const Program& program, const ErrorPath& path, const CheckOptions& opts) {
  Compiled c = vm::compile(program, opts.unroll_bound);
  ReplayOutcome ro = run_fixed(c, opts, path.selection_mask, path.choices);
  Verdict v;
  switch (ro.result.event) {
    case Event::Fail:
      v.kind = VerdictKind::Violation;
      v.label = ro.result.detail;
      v.automaton = automaton_of(v.label);
      break;
    case Event::Fault:
      v.kind = VerdictKind::RuntimeFault;
      v.detail = ro.result.detail;
      break;
    default: throw ReplayDivergence("replay ends without reaching a failure");
  }
  if (!path.steps.empty() && ro.steps != path.steps) throw ReplayDivergence("replay takes a different path");
  v.path = path;
  v.path.steps = std::move(ro.steps);
  return v;
}

std::string render_error_path(const ErrorPath& path) {
  std::ostringstream os;
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    const auto& s = path.steps[i];
    constexpr std::size_t kWidth = 120;
    std::string text = s.statement.size() > kWidth ? s.statement.substr(0, kWidth - 3) + "..." : s.statement;
    os << (i + 1) << ": [" << (s.feature.empty() ? "-" : s.feature) << "] " << s.function << " " << to_string(s.loc)
       << "  " << text;
    if (!s.condition.empty()) os << "  " << s.condition;
    os << '\n';
  }
  return os.str();
}

std::string to_json(const CheckResult& r, int indent) {
  nlohmann::json j;
  j["verdict"] = to_string(r.verdict.kind);
  if (!r.verdict.label.empty()) j["label"] = r.verdict.label;
  if (!r.verdict.automaton.empty()) j["automaton"] = r.verdict.automaton;
  if (!r.verdict.detail.empty()) j["detail"] = r.verdict.detail;
  if (r.verdict.kind == VerdictKind::Violation || r.verdict.kind == VerdictKind::RuntimeFault) {
    nlohmann::json p;
    p["selection"] = r.verdict.path.selection;
    p["choices"] = r.verdict.path.choices;
    p["steps"] = nlohmann::json::array();
    for (const auto& s : r.verdict.path.steps)
      p["steps"].push_back({{"loc", to_string(s.loc)},
                            {"function", s.function},
                            {"statement", s.statement},
                            {"feature", s.feature},
                            {"condition", s.condition}});
    j["path"] = std::move(p);
  }
  j["metrics"] = {{"states_explored", r.metrics.states_explored},
                  {"unique_states", r.metrics.unique_states},
                  {"peak_frontier", r.metrics.peak_frontier},
                  {"wall_seconds", r.metrics.wall_seconds}};
  return j.dump(indent);
}

}  // namespace fav
