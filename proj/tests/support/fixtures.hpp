#pragma once

#include "pql/petri.hpp"

namespace fixtures {

// Choice a1|a2, then b, then c || d, then e.
inline pql::NetSystem f5() {
  pql::NetBuilder b;
  b.place("i", 1).place("p1").place("p2").place("p3").place("p4").place("p5").place("o");
  b.transition("t_a1", "a1").transition("t_a2", "a2").transition("t_b", "b");
  b.transition("t_c", "c").transition("t_d", "d").transition("t_e", "e");
  b.arc("i", "t_a1").arc("t_a1", "p1").arc("i", "t_a2").arc("t_a2", "p1");
  b.arc("p1", "t_b").arc("t_b", "p2").arc("t_b", "p3");
  b.arc("p2", "t_c").arc("t_c", "p4").arc("p3", "t_d").arc("t_d", "p5");
  b.arc("p4", "t_e").arc("p5", "t_e").arc("t_e", "o");
  return b.build();
}

// s, then any number of l (through a silent return), then f.
inline pql::NetSystem f_loop() {
  pql::NetBuilder b;
  b.place("i", 1).place("p1").place("q").place("o");
  b.transition("t_s", "s").transition("t_l", "l").transition("t_r").transition("t_f", "f");
  b.arc("i", "t_s").arc("t_s", "p1");
  b.arc("p1", "t_l").arc("t_l", "q").arc("q", "t_r").arc("t_r", "p1");
  b.arc("p1", "t_f").arc("t_f", "o");
  return b.build();
}

// F5 plus a transition needing {p4, p3, i}, which are never marked together.
inline pql::NetSystem f5_dead() {
  pql::NetBuilder b(f5());
  b.transition("t_dead", "dead");
  b.arc("p4", "t_dead").arc("p3", "t_dead").arc("i", "t_dead").arc("t_dead", "o");
  return b.build();
}

// Reaches [o, p5]: two branches both put a token on o.
inline pql::NetSystem improper() {
  pql::NetBuilder b;
  b.place("i", 1).place("p1").place("p5").place("o");
  b.transition("t1", "x").transition("t2", "y").transition("t3", "z");
  b.arc("i", "t1").arc("t1", "p1").arc("t1", "p5");
  b.arc("p1", "t2").arc("t2", "o").arc("p5", "t3").arc("t3", "o");
  return b.build();
}

inline pql::NetSystem sequence2() {
  pql::NetBuilder b;
  b.place("i", 1).place("p").place("o");
  b.transition("t1", "x").transition("t2", "y");
  b.arc("i", "t1").arc("t1", "p").arc("p", "t2").arc("t2", "o");
  return b.build();
}

inline pql::NetSystem single() {
  pql::NetBuilder b;
  b.place("i", 1).place("o").transition("t", "t").arc("i", "t").arc("t", "o");
  return b.build();
}

inline pql::NetSystem and_split() {
  pql::NetBuilder b;
  b.place("i", 1).place("p1").place("p2").place("q1").place("q2").place("o");
  b.transition("split").transition("x", "x").transition("y", "y").transition("join");
  b.arc("i", "split").arc("split", "p1").arc("split", "p2");
  b.arc("p1", "x").arc("x", "q1").arc("p2", "y").arc("y", "q2");
  b.arc("q1", "join").arc("q2", "join").arc("join", "o");
  return b.build();
}

// A loop whose body is re-entered through a cutoff: t9/t10 repeat the
// concurrent pair t5 || t6.
inline pql::NetSystem jump() {
  pql::NetBuilder b;
  b.place("i", 1);
  for (int k = 2; k <= 11; ++k) b.place("p" + std::to_string(k));
  b.place("o");
  for (int k : {1, 2, 3, 4, 5, 6, 7, 9, 10, 11}) b.transition("t" + std::to_string(k), "l" + std::to_string(k));
  b.arc("i", "t1").arc("t1", "p2").arc("t1", "p3");
  b.arc("p2", "t2").arc("t2", "p4").arc("p3", "t3").arc("t3", "p10");
  b.arc("p4", "t4").arc("p10", "t4").arc("t4", "p5").arc("t4", "p6");
  b.arc("p5", "t5").arc("t5", "p7").arc("p6", "t6").arc("t6", "p8");
  b.arc("p7", "t7").arc("p8", "t7").arc("t7", "p9");
  b.arc("p9", "t9").arc("t9", "p11").arc("p11", "t10").arc("t10", "p7").arc("t10", "p8");
  b.arc("p9", "t11").arc("t11", "o");
  return b.build();
}

}  // namespace fixtures
