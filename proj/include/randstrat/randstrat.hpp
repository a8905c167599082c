#pragma once

#include "randstrat/arena.hpp"
#include "randstrat/arena_io.hpp"
#include "randstrat/builtins.hpp"
#include "randstrat/chain.hpp"
#include "randstrat/condition.hpp"
#include "randstrat/distribution.hpp"
#include "randstrat/error.hpp"
#include "randstrat/graph.hpp"
#include "randstrat/kuhn.hpp"
#include "randstrat/lar.hpp"
#include "randstrat/linalg.hpp"
#include "randstrat/mdp.hpp"
#include "randstrat/monte_carlo.hpp"
#include "randstrat/parity.hpp"
#include "randstrat/pomdp.hpp"
#include "randstrat/rational.hpp"
#include "randstrat/safety.hpp"
#include "randstrat/strategy.hpp"
#include "randstrat/strategy_io.hpp"
#include "randstrat/zielonka_tree.hpp"
