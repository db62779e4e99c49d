# SPDX-FileCopyrightText: 2026-present Remco Boerma <remco.b@educationwarehouse.nl>
#
# SPDX-License-Identifier: MIT
__version__ = "0.1.0"
