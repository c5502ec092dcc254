#pragma once

#include "gossipdyn/dynamic_graph.hpp"
#include "gossipdyn/edge_dynamics.hpp"
#include "gossipdyn/harness.hpp"
#include "gossipdyn/markov_sst.hpp"
#include "gossipdyn/parallel.hpp"
#include "gossipdyn/protocols.hpp"
#include "gossipdyn/renewal_cftp.hpp"
#include "gossipdyn/rng.hpp"
#include "gossipdyn/stats.hpp"
