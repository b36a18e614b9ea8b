"""Nine-stage explicit Runge-Kutta coefficients of order seven.

Derived by solving all 85 rooted-tree order conditions through order 7
to machine precision (max residual below 1e-16, see tools/); the test
suite re-verifies every condition and the empirical order.
"""

A = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.004757130541043923, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [-0.9160339324082307, 1.0143275994021086, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.09027032999254771, -0.05797557117516568, 0.11854707382357951, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [-0.43933721767685313, 1.1034366407556988, -2.256281086591248, 2.007656372541196, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2761013641287594, -0.5861303913463449, 1.198505530156291, -0.6465367742293106, 0.25455585817825716, 0.0, 0.0, 0.0, 0.0],
    [-0.09664010076543128, -0.2513117398116379, 0.513876288832906, 0.5557710311602932, -1.864010984906302, 1.9522051017495117, 0.0, 0.0, 0.0],
    [0.026266543837179225, 0.32785939260729263, -0.6703991143724137, 0.4455143479736567, 0.7012665529610699, -0.16100867415912734, 0.14740038544415698, 0.0, 0.0],
    [0.17152139310507222, -0.23228301776711452, 0.4749668083310249, -0.27772692843621827, 1.0164945799698144, -0.6170571058762077, -0.1768617343161667, 0.6409460049897986, 0.0],
]

B = [0.042165191186183254, 8.951110498524654e-13, -1.4711185028922667e-11, 0.2447436397143427, 0.12202096141733071, 0.24889805551319938, 0.09712469042419104, 0.19059868365693317, 0.05444877810163579]
