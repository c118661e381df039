#pragma once

#include <array>
#include <vector>

#include "atm.hpp"

namespace lct::testutil {

inline std::array<TmMove, 2> tm_row(TmMove on0, TmMove on1) { return {on0, on1}; }

// halts immediately in an accept state
inline AlternatingTM m_accept() {
  AlternatingTM m;
  m.state_names = {"acc"};
  m.state_type = {StateType::Accept};
  m.delta1 = {tm_row({0, 0, +1}, {0, 0, +1})};
  m.delta2 = m.delta1;
  m.q0 = 0;
  m.s = 2;
  return m;
}

// halts immediately in a reject state
inline AlternatingTM m_reject() {
  AlternatingTM m;
  m.state_names = {"rej"};
  m.state_type = {StateType::Reject};
  m.delta1 = {tm_row({0, 0, +1}, {0, 0, +1})};
  m.delta2 = m.delta1;
  m.q0 = 0;
  m.s = 2;
  return m;
}

// existential; accepts exactly when the first tape cell is 1
inline AlternatingTM m_first_bit() {
  AlternatingTM m;
  m.state_names = {"q0", "acc", "rej"};
  m.state_type = {StateType::Exists, StateType::Accept, StateType::Reject};
  m.delta1 = {tm_row({2, 0, +1}, {1, 1, +1}), tm_row({1, 0, +1}, {1, 0, +1}),
              tm_row({2, 0, +1}, {2, 0, +1})};
  m.delta2 = m.delta1;
  m.q0 = 0;
  m.s = 2;
  return m;
}

// existential over three cells; the second branch falls off the left tape end
inline AlternatingTM m_boundary() {
  AlternatingTM m;
  m.state_names = {"q0", "acc", "rej"};
  m.state_type = {StateType::Exists, StateType::Accept, StateType::Reject};
  m.delta1 = {tm_row({1, 0, +1}, {1, 1, +1}), tm_row({1, 0, +1}, {1, 0, +1}),
              tm_row({2, 0, +1}, {2, 0, +1})};
  m.delta2 = {tm_row({1, 1, -1}, {1, 0, -1}), tm_row({1, 0, +1}, {1, 0, +1}),
              tm_row({2, 0, +1}, {2, 0, +1})};
  m.q0 = 0;
  m.s = 3;
  return m;
}

// universal machine whose first branch bounces between the two cells forever
inline AlternatingTM m_loop() {
  AlternatingTM m;
  m.state_names = {"q0", "rej"};
  m.state_type = {StateType::Forall, StateType::Reject};
  m.delta1 = {tm_row({0, 0, -1}, {0, 1, +1}), tm_row({1, 0, +1}, {1, 0, +1})};
  m.delta2 = {tm_row({1, 0, +1}, {1, 1, +1}), tm_row({1, 0, +1}, {1, 0, +1})};
  m.q0 = 0;
  m.s = 2;
  return m;
}

inline std::vector<AlternatingTM> machine_corpus() {
  return {m_accept(), m_reject(), m_first_bit(), m_boundary(), m_loop()};
}

// dense full-configuration-space value iteration, written independently of the
// library's reachable-set evaluator
struct DenseOracle {
  const AlternatingTM& m;
  int nq, nconf;
  std::vector<char> acc;

  explicit DenseOracle(const AlternatingTM& mm)
      : m(mm), nq((int)mm.state_names.size()), nconf((1 << mm.s) * mm.s * nq) {
    acc.assign(nconf, 0);
    for (int id = 0; id < nconf; id++)
      if (m.state_type[unpack(id).state] == StateType::Accept) acc[id] = 1;
    for (int round = 0; round <= nconf; round++)
      for (int id = 0; id < nconf; id++) {
        Configuration c = unpack(id);
        if (m.halting(c.state) || acc[id]) continue;
        char a1 = acc[pack(ostep(c, 1))], a2 = acc[pack(ostep(c, 2))];
        acc[id] = m.state_type[c.state] == StateType::Forall ? (a1 & a2) : (a1 | a2);
      }
  }

  int pack(const Configuration& c) const {
    int bits = 0;
    for (int i = 0; i < m.s; i++) bits |= c.tape[i] << i;
    return (bits * m.s + (c.head - 1)) * nq + c.state;
  }
  Configuration unpack(int id) const {
    Configuration c;
    c.state = id % nq;
    id /= nq;
    c.head = id % m.s + 1;
    int bits = id / m.s;
    c.tape.resize(m.s);
    for (int i = 0; i < m.s; i++) c.tape[i] = (bits >> i) & 1;
    return c;
  }
  Configuration ostep(Configuration c, int which) const {
    const TmMove& mv = (which == 1 ? m.delta1 : m.delta2)[c.state][c.tape[c.head - 1]];
    c.tape[c.head - 1] = mv.write;
    if (c.head + mv.dir < 1 || c.head + mv.dir > m.s) {
      c.state = m.reject_state();
    } else {
      c.head += mv.dir;
      c.state = mv.state;
    }
    return c;
  }
};

}  // namespace lct::testutil
