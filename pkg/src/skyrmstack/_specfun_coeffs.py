"""Frozen Chebyshev coefficients for the large-argument special-function
branches.  Regenerate with tools/gen_specfun_coeffs.py (mpmath, 50 digits);
see that script for the variable mappings."""

import numpy as np

J0_LARGE_P = np.array([
    0.9986523398776954,
    -0.00132937162125028,
    1.761305551290559e-05,
    -6.319367118733069e-07,
    3.948825587093808e-08,
    -3.5409678948019087e-09,
    4.103246366872386e-10,
    -5.765747662655223e-11,
    9.423105578391987e-12,
    -1.7401405706283883e-12,
    3.5557750052411727e-13,
    -7.914641501338011e-14,
    1.8959456362959717e-14,
    -4.841483019171441e-15,
    1.3078555195814712e-15,
    -3.714050821235303e-16,
    1.1030231775027463e-16,
    -3.410936202788111e-17,
    1.094218770689358e-17,
    -3.6299053259509436e-18,
    1.2418021384026847e-18,
])

J0_LARGE_Q = np.array([
    -0.12364702582167493,
    0.0013190194049922607,
    -3.218799121266175e-05,
    1.6237093205642789e-06,
    -1.2743289742032805e-07,
    1.3513032763134409e-08,
    -1.785075905119705e-09,
    2.79085713479036e-10,
    -4.988908027652832e-11,
    9.950713667806641e-12,
    -2.1751206043008756e-12,
    5.140127162427453e-13,
    -1.2993242656056162e-13,
    3.4837635776829694e-14,
    -9.840057572422984e-15,
    2.911527491614471e-15,
    -8.982151166298915e-16,
    2.8777688962295494e-16,
    -9.542904796514662e-17,
    3.2658157414093715e-17,
    -1.1505172152548943e-17,
    4.163183556449881e-18,
    -1.544324115998176e-18,
])

K0_TAIL = np.array([
    1.2201515410329777,
    -0.0314481013119645,
    0.0015698838857300533,
    -0.00012849549581627802,
    1.39498137188765e-05,
    -1.8317555227191195e-06,
    2.766813639445015e-07,
    -4.660489897687948e-08,
    8.574034017414225e-09,
    -1.6975345093890614e-09,
    3.5773972814003283e-10,
    -7.957489244477396e-11,
    1.8559491149549264e-11,
    -4.514597883374519e-12,
    1.1403405882073441e-12,
    -2.9800969231481774e-13,
    8.032890775068347e-14,
    -2.2275133267462308e-14,
    6.340076476275038e-15,
    -1.84859337791694e-15,
    5.512055999305779e-16,
    -1.678231125508316e-16,
    5.210391771428435e-17,
    -1.6475805781998637e-17,
    5.300433367149325e-18,
    -1.7331701579862606e-18,
])

K1_TAIL = np.array([
    1.3603130952422213,
    0.10392373657681724,
    -0.002857816859622779,
    0.00019521551847135162,
    -1.936197974166083e-05,
    2.406484947837217e-06,
    -3.5019606030878126e-07,
    5.7410841254500495e-08,
    -1.0345762465678097e-08,
    2.0150497551970347e-09,
    -4.1903547593419254e-10,
    9.218315187605315e-11,
    -2.129967838427791e-11,
    5.139639673482343e-12,
    -1.2891739609498229e-12,
    3.348419666052242e-13,
    -8.976705182010117e-14,
    2.4771544242195297e-14,
    -7.019837089213075e-15,
    2.038703166235679e-15,
    -6.057047270539039e-16,
    1.8380935749826598e-16,
    -5.689462842624688e-17,
    1.7940510311874454e-17,
    -5.756744054212516e-18,
    1.8778640849209998e-18,
])
