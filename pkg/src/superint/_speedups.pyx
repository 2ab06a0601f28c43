# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term-arithmetic kernel (hot inner loops of the exact algebra).

Semantics identical to superint._kernel_py; exponent tuples are added
with C longs (degrees here never approach overflow), coefficient
arithmetic stays with the exact rational objects (gmpy2.mpq/Fraction).
"""

from cpython.dict cimport PyDict_GetItem, PyDict_SetItem, PyDict_DelItem
from cpython.long cimport PyLong_AsLong, PyLong_FromLong
from cpython.ref cimport PyObject
from cpython.tuple cimport (PyTuple_GET_ITEM, PyTuple_GET_SIZE, PyTuple_New,
                            PyTuple_SET_ITEM)
from cpython.ref cimport Py_INCREF

BACKEND = "compiled"


cdef inline tuple _key_add(tuple ka, tuple kb):
    cdef Py_ssize_t n = PyTuple_GET_SIZE(ka)
    cdef tuple out = PyTuple_New(n)
    cdef Py_ssize_t j
    cdef long s
    cdef object val
    for j in range(n):
        s = PyLong_AsLong(<object>PyTuple_GET_ITEM(ka, j)) + \
            PyLong_AsLong(<object>PyTuple_GET_ITEM(kb, j))
        val = PyLong_FromLong(s)
        Py_INCREF(val)
        PyTuple_SET_ITEM(out, j, val)
    return out


cdef inline tuple _key_double(tuple ka):
    cdef Py_ssize_t n = PyTuple_GET_SIZE(ka)
    cdef tuple out = PyTuple_New(n)
    cdef Py_ssize_t j
    cdef object val
    for j in range(n):
        val = PyLong_FromLong(2 * PyLong_AsLong(<object>PyTuple_GET_ITEM(ka, j)))
        Py_INCREF(val)
        PyTuple_SET_ITEM(out, j, val)
    return out


cdef inline void _accumulate(dict out, tuple key, object c):
    cdef PyObject *prev = PyDict_GetItem(out, key)
    cdef object s
    if prev is NULL:
        PyDict_SetItem(out, key, c)
    else:
        s = <object>prev + c
        if s:
            PyDict_SetItem(out, key, s)
        else:
            PyDict_DelItem(out, key)


def mul_terms(dict a, dict b):
    """Raw product of two term dicts (no rewrite normalization)."""
    if len(a) > len(b):
        a, b = b, a
    cdef dict out = {}
    cdef tuple ka, kb
    cdef object ca, cb
    for ka, ca in a.items():
        for kb, cb in b.items():
            _accumulate(out, _key_add(ka, kb), ca * cb)
    return out


def square_terms(dict a):
    """Raw square of a term dict; exploits symmetry of the term pairs."""
    cdef list items = list(a.items())
    cdef Py_ssize_t n = len(items)
    cdef dict out = {}
    cdef Py_ssize_t idx, jdx
    cdef tuple ka, kb
    cdef object ca, cb, twice
    for idx in range(n):
        ka = <tuple>PyTuple_GET_ITEM(<tuple>items[idx], 0)
        ca = <object>PyTuple_GET_ITEM(<tuple>items[idx], 1)
        _accumulate(out, _key_double(ka), ca * ca)
        twice = ca + ca
        for jdx in range(idx + 1, n):
            kb = <tuple>PyTuple_GET_ITEM(<tuple>items[jdx], 0)
            cb = <object>PyTuple_GET_ITEM(<tuple>items[jdx], 1)
            _accumulate(out, _key_add(ka, kb), twice * cb)
    return out


def add_into(dict acc, dict other, coeff=None):
    """In-place acc += other (optionally scaled by a rational coeff)."""
    cdef tuple key
    cdef object c
    if coeff is None:
        for key, c in other.items():
            _accumulate(acc, key, c)
    else:
        if not coeff:
            return acc
        for key, c in other.items():
            _accumulate(acc, key, c * coeff)
    return acc


def scale_terms(dict a, coeff):
    cdef dict out = {}
    cdef tuple key
    cdef object c
    if not coeff:
        return out
    for key, c in a.items():
        PyDict_SetItem(out, key, c * coeff)
    return out


def neg_terms(dict a):
    cdef dict out = {}
    cdef tuple key
    cdef object c
    for key, c in a.items():
        PyDict_SetItem(out, key, -c)
    return out
