#pragma once

#include "dmod/error.hpp"
#include "dmod/formal.hpp"
#include "dmod/fracpow.hpp"
#include "dmod/global.hpp"
#include "dmod/io.hpp"
#include "dmod/matrix.hpp"
#include "dmod/poly.hpp"
#include "dmod/quiver.hpp"
#include "dmod/rat.hpp"
#include "dmod/series.hpp"
#include "dmod/tate.hpp"
#include "dmod/transforms.hpp"
