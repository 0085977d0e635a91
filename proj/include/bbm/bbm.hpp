#pragma once

#include "bbm/auction.hpp"
#include "bbm/certify.hpp"
#include "bbm/copies.hpp"
#include "bbm/generate.hpp"
#include "bbm/graph.hpp"
#include "bbm/happiness.hpp"
#include "bbm/io.hpp"
#include "bbm/oracle.hpp"
#include "bbm/scaling.hpp"
