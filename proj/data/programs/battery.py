battery = 90
for i in range(3):
    battery = battery - 10
