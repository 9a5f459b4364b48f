// Copyright 2026 The twopass Authors.
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

#include "twopass/fst/io.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "twopass/error.h"

static_assert(std::endian::native == std::endian::little, "binary formats assume little-endian hosts");

namespace twopass {
namespace {

constexpr char kMagic[] = "WFST1";
constexpr size_t kMagicLen = 5;
constexpr uint32_t kNone = 0xffffffffu;

template <typename T>
void Put(std::ostream &out, T value) {
  out.write(reinterpret_cast<const char *>(&value), sizeof(T));
}

template <typename T>
T Get(std::istream &in) {
  T value;
  if (!in.read(reinterpret_cast<char *>(&value), sizeof(T)))
    throw FormatError("truncated binary graph");
  return value;
}

void PutSymbols(std::ostream &out, const std::shared_ptr<const SymbolTable> &syms) {
  Put<uint8_t>(out, syms ? 1 : 0);
  if (!syms) return;
  Put<uint32_t>(out, static_cast<uint32_t>(syms->Size()));
  for (Label id = 0; id < syms->AvailableKey(); ++id) {
    if (!syms->Contains(id)) continue;
    const std::string &sym = syms->Find(id);
    Put<uint32_t>(out, static_cast<uint32_t>(id));
    Put<uint32_t>(out, static_cast<uint32_t>(sym.size()));
    out.write(sym.data(), static_cast<std::streamsize>(sym.size()));
  }
}

std::shared_ptr<const SymbolTable> GetSymbols(std::istream &in) {
  if (in.peek() == std::char_traits<char>::eof()) return nullptr;
  if (!Get<uint8_t>(in)) return nullptr;
  auto syms = std::make_shared<SymbolTable>();
  uint32_t count = Get<uint32_t>(in);
  for (uint32_t i = 0; i < count; ++i) {
    uint32_t id = Get<uint32_t>(in);
    uint32_t len = Get<uint32_t>(in);
    std::string sym(len, '\0');
    if (!in.read(sym.data(), len)) throw FormatError("truncated symbol table in binary graph");
    syms->AddSymbol(sym, static_cast<Label>(id));
  }
  return syms;
}

}  // namespace

Wfst ReadWfstText(std::istream &in) {
  Wfst fst;
  std::string line;
  size_t lineno = 0;
  auto ensure = [&](long long s) {
    if (s < 0) throw FormatError("negative state id on line " + std::to_string(lineno));
    while (fst.NumStates() <= s) fst.AddState();
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    try {
      if (tok.size() == 4 || tok.size() == 5) {
        long long src = std::stoll(tok[0]), dst = std::stoll(tok[1]);
        long long il = std::stoll(tok[2]), ol = std::stoll(tok[3]);
        double w = tok.size() == 5 ? std::stod(tok[4]) : 0.0;
        ensure(src);
        ensure(dst);
        if (fst.Start() == kNoState) fst.SetStart(static_cast<StateId>(src));
        fst.AddArc(static_cast<StateId>(src),
                   Arc(static_cast<Label>(il), static_cast<Label>(ol), w, static_cast<StateId>(dst)));
      } else if (tok.size() <= 2) {
        long long s = std::stoll(tok[0]);
        double w = tok.size() == 2 ? std::stod(tok[1]) : 0.0;
        ensure(s);
        if (fst.Start() == kNoState) fst.SetStart(static_cast<StateId>(s));
        fst.SetFinal(static_cast<StateId>(s), w);
      } else {
        throw FormatError("bad field count");
      }
    } catch (const std::logic_error &) {
      throw FormatError("graph text line " + std::to_string(lineno) + ": cannot parse '" + line + "'");
    } catch (const FormatError &) {
      throw FormatError("graph text line " + std::to_string(lineno) +
                        ": expected 'src dst ilabel olabel weight' or 'state [weight]'");
    }
  }
  fst.Validate();
  return fst;
}

void WriteWfstText(const Wfst &fst, std::ostream &out) {
  if (fst.Start() == kNoState) return;
  // A dead start state has an empty language; an empty file reads back as
  // the empty machine.
  if (fst.NumArcs(fst.Start()) == 0 && !fst.IsFinal(fst.Start())) return;
  out.precision(17);
  // Start state first so the reader recovers it.
  std::vector<StateId> order;
  order.push_back(fst.Start());
  for (StateId s = 0; s < fst.NumStates(); ++s)
    if (s != fst.Start()) order.push_back(s);
  for (StateId s : order) {
    for (const Arc &arc : fst.Arcs(s))
      out << s << '\t' << arc.next_state << '\t' << arc.ilabel << '\t' << arc.olabel << '\t'
          << arc.weight.Value() << '\n';
    if (fst.IsFinal(s)) out << s << '\t' << fst.Final(s).Value() << '\n';
  }
}

Wfst ReadWfstBinary(std::istream &in) {
  char magic[kMagicLen];
  if (!in.read(magic, kMagicLen) || std::memcmp(magic, kMagic, kMagicLen) != 0)
    throw FormatError("bad magic: not a WFST1 binary graph");
  uint32_t num_states = Get<uint32_t>(in);
  uint32_t start = Get<uint32_t>(in);
  uint32_t num_arcs = Get<uint32_t>(in);
  uint32_t num_finals = Get<uint32_t>(in);
  Wfst fst;
  fst.ReserveStates(num_states);
  for (uint32_t i = 0; i < num_states; ++i) fst.AddState();
  if (start != kNone) fst.SetStart(static_cast<StateId>(start));
  for (uint32_t i = 0; i < num_arcs; ++i) {
    uint32_t src = Get<uint32_t>(in);
    uint32_t il = Get<uint32_t>(in);
    uint32_t ol = Get<uint32_t>(in);
    float w = Get<float>(in);
    uint32_t next = Get<uint32_t>(in);
    if (src >= num_states || next >= num_states) throw FormatError("arc references invalid state");
    fst.AddArc(static_cast<StateId>(src),
               Arc(static_cast<Label>(il), static_cast<Label>(ol), static_cast<double>(w),
                   static_cast<StateId>(next)));
  }
  for (uint32_t i = 0; i < num_finals; ++i) {
    uint32_t s = Get<uint32_t>(in);
    float w = Get<float>(in);
    if (s >= num_states) throw FormatError("final weight for invalid state");
    fst.SetFinal(static_cast<StateId>(s), static_cast<double>(w));
  }
  fst.SetInputSymbols(GetSymbols(in));
  fst.SetOutputSymbols(GetSymbols(in));
  fst.Validate();
  return fst;
}

void WriteWfstBinary(const Wfst &fst, std::ostream &out) {
  out.write(kMagic, kMagicLen);
  uint32_t num_finals = 0;
  for (StateId s = 0; s < fst.NumStates(); ++s) num_finals += fst.IsFinal(s) ? 1 : 0;
  Put<uint32_t>(out, static_cast<uint32_t>(fst.NumStates()));
  Put<uint32_t>(out, fst.Start() == kNoState ? kNone : static_cast<uint32_t>(fst.Start()));
  Put<uint32_t>(out, static_cast<uint32_t>(fst.NumArcs()));
  Put<uint32_t>(out, num_finals);
  for (StateId s = 0; s < fst.NumStates(); ++s) {
    for (const Arc &arc : fst.Arcs(s)) {
      Put<uint32_t>(out, static_cast<uint32_t>(s));
      Put<uint32_t>(out, static_cast<uint32_t>(arc.ilabel));
      Put<uint32_t>(out, static_cast<uint32_t>(arc.olabel));
      Put<float>(out, static_cast<float>(arc.weight.Value()));
      Put<uint32_t>(out, static_cast<uint32_t>(arc.next_state));
    }
  }
  for (StateId s = 0; s < fst.NumStates(); ++s) {
    if (!fst.IsFinal(s)) continue;
    Put<uint32_t>(out, static_cast<uint32_t>(s));
    Put<float>(out, static_cast<float>(fst.Final(s).Value()));
  }
  PutSymbols(out, fst.InputSymbols());
  PutSymbols(out, fst.OutputSymbols());
}

Wfst ReadWfst(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open graph " + path);
  char magic[kMagicLen] = {};
  in.read(magic, kMagicLen);
  bool binary = in.gcount() == static_cast<std::streamsize>(kMagicLen) &&
                std::memcmp(magic, kMagic, kMagicLen) == 0;
  in.clear();
  in.seekg(0);
  return binary ? ReadWfstBinary(in) : ReadWfstText(in);
}

void WriteWfst(const Wfst &fst, const std::string &path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot write graph " + path);
  if (binary)
    WriteWfstBinary(fst, out);
  else
    WriteWfstText(fst, out);
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace twopass
