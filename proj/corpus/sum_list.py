def sumList(n: list[int]) -> int:
    total = 0
    for x in n:
        total = total + x
    return total
