#pragma once

#include "pwla/bpn.hpp"
#include "pwla/core.hpp"
#include "pwla/dataset.hpp"
#include "pwla/error.hpp"
#include "pwla/evaluation.hpp"
#include "pwla/folds.hpp"
#include "pwla/matrix.hpp"
#include "pwla/methods.hpp"
#include "pwla/pca.hpp"
#include "pwla/smffnn.hpp"
