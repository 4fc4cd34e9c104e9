// Copyright 2026 windctl contributors
// SPDX-License-Identifier: Apache-2.0
