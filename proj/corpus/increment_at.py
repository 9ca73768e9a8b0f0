def incrementAt(a: list[int], j: int) -> int:
    if j >= 0 and j < len(a):
        a[j] = a[j] + 1
        return a[j]
    return -1
