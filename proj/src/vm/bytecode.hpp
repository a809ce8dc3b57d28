// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fav/ast.hpp"
#include "vm/product_set.hpp"

namespace fav::vm {

enum class VKind : std::uint8_t { Int, Bool, Sym, Null, Ref };

struct Value {
  VKind kind = VKind::Int;
  std::int64_t v = 0;
  bool operator==(const Value&) const = default;
};

enum class Opc : std::uint8_t {
  Const,       // push k
  LoadL,       // push locals[a]
  StoreL,      // locals[a] = pop
  LoadG,       // push globals[a]
  StoreG,      // globals[a] = pop
  FeatExpr,    // push truth of feature expression a (choice point, join c)
  GetF,        // push pop()->fields[a]
  SetF,        // v = pop; r = pop; r->fields[a] = v
  New,         // push new record a
  Call,        // call function a with b arguments
  Ret,         // return pop
  RetVoid,
  MissingRet,  // fell off a non-void function
  Jump,        // pc = a
  JumpF,       // if !pop: pc = a; b = branch statement or -1
  Un,          // op
  Bin,         // op
  Nondet,      // push value in [c, d] (choice point, join b)
  Fail,        // a = label
  Step,        // statement a starts
  Pop,
  LoopInit,    // locals[a] = 0
  LoopTick,    // ++locals[a] > c: loop bound hit
};

struct Instr {
  Opc op = Opc::Pop;
  Op op2 = Op::None;
  std::int32_t a = 0;
  std::int32_t b = 0;
  std::int64_t c = 0;
  std::int64_t d = 0;
  Value k;
};

struct StmtInfo {
  SourceLoc loc;
  std::string function;
  std::string text;
  std::string feature;
  std::string condition;  // printed condition of if/while
};

struct FunctionCode {
  std::string name;
  int params = 0;
  int locals = 0;  // including params and loop counters
  bool returns_value = false;
  std::vector<Instr> code;
};

struct RecordInfo {
  std::string name;
  std::vector<Value> defaults;
};

struct Compiled {
  std::vector<FunctionCode> functions;
  std::vector<RecordInfo> records;
  std::vector<Value> globals;  // initial values
  std::vector<std::string> global_names;
  std::vector<StmtInfo> stmts;
  std::vector<std::string> labels;
  std::vector<std::string> symbols;  // interned symbol texts; 0 is ""
  std::vector<ProductSet> feature_exprs;
  std::vector<std::string> feature_variables;
  int entry = -1;
};

/// Compiles a type-correct program. Throws FavError on type errors.
Compiled compile(const Program& p, int unroll_bound);

}  // namespace fav::vm
