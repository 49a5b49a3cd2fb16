#pragma once

// Six-atom FOND toy used to check the constrain compilation exhaustively.
// Plan (e, a, c) reaches the goal with a banned action in a later step.

namespace fondsp::testing {

inline constexpr const char *kToyDomain = R"(
(define (domain toy)
  (:requirements :strips :non-deterministic)
  (:predicates (p0) (p1) (p2) (p3) (p4) (p5))
  (:action a :parameters () :precondition (p0) :effect (oneof (p1) (and (p1) (p5))))
  (:action b :parameters () :precondition (p0) :effect (and (p2) (not (p0))))
  (:action c :parameters () :precondition (p1) :effect (p3))
  (:action d :parameters () :precondition (p2) :effect (p3))
  (:action e :parameters () :precondition (and) :effect (oneof (p4) (not (p1))))
  (:action f :parameters () :precondition (p4) :effect (and (p0) (not (p4)))))
)";

inline constexpr const char *kToyProblem = R"(
(define (problem toy-1) (:domain toy) (:init (p0)) (:goal (p3)))
)";

}  // namespace fondsp::testing
