#pragma once

#include "linfty/core.hpp"
#include "linfty/linalg.hpp"
#include "linfty/poly.hpp"
#include "linfty/cdga.hpp"
#include "linfty/linf_algebra.hpp"
#include "linfty/homalg.hpp"
#include "linfty/ce.hpp"
#include "linfty/forms.hpp"
#include "linfty/nerve.hpp"
#include "linfty/halperin.hpp"
#include "linfty/dsl.hpp"
#include "linfty/pipeline.hpp"
