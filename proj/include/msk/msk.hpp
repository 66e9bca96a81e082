#pragma once

#include "msk/disintegration.hpp"
#include "msk/document.hpp"
#include "msk/errors.hpp"
#include "msk/fibred.hpp"
#include "msk/groupoid.hpp"
#include "msk/kernel.hpp"
#include "msk/measure.hpp"
#include "msk/pullback.hpp"
#include "msk/rational.hpp"
#include "msk/setsystem.hpp"
#include "msk/space.hpp"
