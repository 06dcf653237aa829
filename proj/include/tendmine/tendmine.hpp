#pragma once

#include "dataset.hpp"
#include "evaluation.hpp"
#include "export.hpp"
#include "folds.hpp"
#include "induction.hpp"
#include "infotheory.hpp"
#include "io.hpp"
#include "report.hpp"
#include "tree.hpp"
#include "tree_io.hpp"
