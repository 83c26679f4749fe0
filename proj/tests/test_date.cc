#include <gtest/gtest.h>

#include <random>

#include "depositlag/date.h"
#include "depositlag/errors.h"
#include "test_support.h"

using namespace depositlag;
using depositlag::testing::brute_diff;
using depositlag::testing::brute_days_in_month;

TEST(CalendarDate, DiffExamples) {
  EXPECT_EQ(date_diff_days(CalendarDate(2017, 9, 1), CalendarDate(2017, 9, 1)), 0);
  EXPECT_EQ(date_diff_days(CalendarDate(2013, 1, 1), CalendarDate(2019, 3, 18)), 2267);
  EXPECT_EQ(date_diff_days(CalendarDate(2018, 5, 10), CalendarDate(2018, 5, 1)), -9);
}

TEST(CalendarDate, RejectsImpossibleDates) {
  EXPECT_THROW(CalendarDate(2017, 2, 29), RecordRejected);
  EXPECT_THROW(CalendarDate(2017, 13, 1), RecordRejected);
  EXPECT_THROW(CalendarDate(2017, 4, 31), RecordRejected);
  EXPECT_THROW(CalendarDate(2017, 1, 0), RecordRejected);
  EXPECT_NO_THROW(CalendarDate(2016, 2, 29));
  EXPECT_NO_THROW(CalendarDate(2000, 2, 29));
  EXPECT_THROW(CalendarDate(1900, 2, 29), RecordRejected);
  try {
    CalendarDate(2019, 2, 30);
  } catch (const RecordRejected& e) {
    EXPECT_EQ(e.reason(), RejectReason::kInvalidDate);
  }
}

TEST(CalendarDate, ParseIso) {
  EXPECT_EQ(CalendarDate::parse_iso("2017-09-01"), CalendarDate(2017, 9, 1));
  EXPECT_EQ(CalendarDate::parse_iso("2017-09-01T10:22:03Z"), CalendarDate(2017, 9, 1));
  EXPECT_EQ(CalendarDate::parse_iso("2017-09-01 10:22"), CalendarDate(2017, 9, 1));
  EXPECT_THROW(CalendarDate::parse_iso("2017-9-1"), DataError);
  EXPECT_THROW(CalendarDate::parse_iso("2017-09-31"), DataError);
  EXPECT_THROW(CalendarDate::parse_iso(""), DataError);
  EXPECT_THROW(CalendarDate::parse_iso("2017-09-01x"), DataError);
  EXPECT_EQ(CalendarDate(2016, 2, 29).iso(), "2016-02-29");
}

TEST(CalendarDate, SerialRoundTrip) {
  EXPECT_EQ(CalendarDate(1970, 1, 1).serial(), 0);
  for (std::int64_t s = -700000; s <= 800000; s += 997) {
    EXPECT_EQ(CalendarDate::from_serial(s).serial(), s);
  }
  EXPECT_EQ(CalendarDate(2016, 2, 28).next(), CalendarDate(2016, 2, 29));
  EXPECT_EQ(CalendarDate(2016, 12, 31).next(), CalendarDate(2017, 1, 1));
  EXPECT_EQ(CalendarDate(2016, 3, 1).plus_days(-1), CalendarDate(2016, 2, 29));
}

TEST(CalendarDate, AgreesWithDayWalk) {
  std::mt19937_64 rng(7);
  auto random_date = [&] {
    const int y = 2000 + static_cast<int>(rng() % 31);
    const int m = 1 + static_cast<int>(rng() % 12);
    const int d = 1 + static_cast<int>(rng() % brute_days_in_month(y, m));
    return CalendarDate(y, m, d);
  };
  for (int i = 0; i < 500; ++i) {
    const CalendarDate a = random_date();
    const CalendarDate b = random_date();
    ASSERT_EQ(date_diff_days(a, b), brute_diff(a.year(), a.month(), a.day(), b.year(), b.month(), b.day()))
        << a.iso() << " " << b.iso();
    ASSERT_EQ(date_diff_days(a, b), -date_diff_days(b, a));
  }
}

TEST(CalendarDate, Ordering) {
  EXPECT_LT(CalendarDate(2016, 12, 31), CalendarDate(2017, 1, 1));
  EXPECT_LT(CalendarDate(2017, 1, 31), CalendarDate(2017, 2, 1));
}
