#pragma once

#include "greedynet/metric.hpp"
#include "greedynet/network.hpp"
#include "greedynet/greedy.hpp"
#include "greedynet/geometry.hpp"
#include "greedynet/set_cover.hpp"
#include "greedynet/routing_sets.hpp"
#include "greedynet/hakimi.hpp"
#include "greedynet/directed_game.hpp"
#include "greedynet/undirected_game.hpp"
#include "greedynet/equilibrium.hpp"
#include "greedynet/instances.hpp"
#include "greedynet/io.hpp"
