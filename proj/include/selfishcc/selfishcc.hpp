#pragma once

#include "selfishcc/bounds.hpp"
#include "selfishcc/combinatorics.hpp"
#include "selfishcc/delivery.hpp"
#include "selfishcc/demands.hpp"
#include "selfishcc/fds.hpp"
#include "selfishcc/oracle.hpp"
#include "selfishcc/parallel.hpp"
#include "selfishcc/placement.hpp"
#include "selfishcc/rational.hpp"
